// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance [--seed N]

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "hierdepth/hierdepth.hpp"
#include "test_support.hpp"

using namespace hierdepth;
using agcode::EvalPoint;
using agcode::LinearCode;
using agcode::ProjPoint;
using agcode::Space;
using gf::FMatrix;
using gf::PrimeField;
using picard::DivisorClass;
using picard::Lattice;
namespace ht = hierdepth::test;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Fails the enclosing criterion with a message; keeps the first failure.
struct Checker {
    Outcome& out;
    bool operator()(bool cond, const std::string& what) const {
        if (!cond && out.pass) {
            out.pass = false;
            out.detail = what;
        }
        return cond;
    }
};

// Every filtration built during the run, with the polarization used for slopes.
struct Recorded {
    depth::HierFiltration filtration;
    DivisorClass polarization;
    std::string origin;
};
std::vector<Recorded> g_filtrations;

std::vector<std::uint32_t> random_covector(std::size_t r, const PrimeField& f, std::mt19937_64& g) {
    std::uniform_int_distribution<std::uint32_t> v(0, f.p() - 1);
    std::vector<std::uint32_t> w(r);
    do
        for (auto& x : w) x = v(g);
    while (std::all_of(w.begin(), w.end(), [](auto x) { return x == 0; }));
    return w;
}

hecke::SubsheafModel random_model(const PrimeField& f, std::mt19937_64& g) {
    std::uniform_int_distribution<std::size_t> rk(1, 4);
    std::uniform_int_distribution<std::int64_t> deg(0, 4);
    std::vector<std::int64_t> d(rk(g));
    for (auto& x : d) x = deg(g);
    return hecke::full_sections(d, 20, f);
}

// ---------------------------------------------------------------------------

Outcome ac1() {
    Outcome o;
    Checker check{o};
    const auto cd = [](std::vector<std::int64_t> d, std::int64_t l) { return depth::curve_split_depth(d, l); };
    check(cd({3, 1, 0}, 0) == depth::DepthResult::of(4), "O(3)+O(1)+O(0) != 4");
    check(cd({1, 1, 0}, 0) == depth::DepthResult::of(2), "O(1)+O(1)+O(0) != 2");
    check(cd({1, 0, 0}, 0) == depth::DepthResult::of(1), "O(1)+O(0)+O(0) != 1");
    check(cd({1, -1}, 0) == depth::DepthResult::of(0), "O(1)+O(-1) != 0");
    check(cd({2}, 3).is_no_filtration(), "O(2) with lambda0 degree 3 should have no filtration");
    check(depth::mmp_exact_depth(5, {2, 4}, {0, 1}) == 10, "mmp_exact_depth(5,(2,4),(0,1)) != 10");
    const DivisorClass c(Lattice::blowup_p2(2), {5, 2, 3});
    check(picard::decompose_max(c) == 10, "decompose_max(5f*H+2E1+3E2) != 10");
    o.detail = o.pass ? "4, 2, 1, 0; blowup depth 10; decompose_max 10" : o.detail;
    return o;
}

Outcome ac2(std::mt19937_64& g) {
    Outcome o;
    Checker check{o};
    std::size_t skipped = 0;
    for (std::uint32_t p : {5U, 7U}) {
        const PrimeField f(p);
        std::uniform_int_distribution<std::size_t> pt(0, p);
        int checked = 0;
        while (checked < 200) {
            const auto model = random_model(f, g);
            if (model.dimension() < 2) continue;
            const auto i = pt(g);
            auto j = pt(g);
            while (j == i) j = pt(g);
            const hecke::PointFunctional a(hecke::RationalPoint::nth(i, f), random_covector(model.rank(), f, g));
            const hecke::PointFunctional b(hecke::RationalPoint::nth(j, f), random_covector(model.rank(), f, g));
            std::optional<hecke::CommuteReport> rep;
            try {
                rep = hecke::commute_check(model, a, b);
            } catch (const Error& e) {
                // covector vanishing on the subspace: not an instance of the statement
                if (!check(e.code() == Errc::VacuousTransform, e.what())) return o;
                ++skipped;
                continue;
            }
            if (!check(rep->v12 && rep->v21 && *rep->v12 == rep->joint && *rep->v21 == rep->joint,
                       "routes disagree over F_" + std::to_string(p)))
                return o;
            ++checked;
        }
    }

    const PrimeField f(7);
    int perms = 0;
    while (perms < 50) {
        const auto model = random_model(f, g);
        if (model.dimension() < 4) continue;
        std::vector<std::size_t> idx(f.p() + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), g);
        std::vector<hecke::PointFunctional> phis;
        for (std::size_t k = 0; k < 4; ++k)
            phis.emplace_back(hecke::RationalPoint::nth(idx[k], f), random_covector(model.rank(), f, g));
        auto run = [&](const std::vector<std::size_t>& order) -> std::optional<FMatrix> {
            auto m = model;
            for (auto k : order) {
                try {
                    m = hecke::apply_transform(m, phis[k]);
                } catch (const Error&) {
                    return std::nullopt;
                }
            }
            return m.basis();
        };
        std::vector<std::size_t> order{0, 1, 2, 3};
        const auto reference = run(order);
        if (!reference) {
            ++skipped;
            continue;
        }
        const auto joint = hecke::joint_kernel(model, phis);
        check(*reference == joint, "ordered chain differs from the joint kernel");
        while (std::next_permutation(order.begin(), order.end())) {
            const auto other = run(order);
            if (!check(other && *other == *reference, "a reordering of four transforms disagrees")) return o;
        }
        ++perms;
    }
    if (o.pass)
        o.detail = "400 pairs equal, 50 x 24 orderings agree (" + std::to_string(skipped) + " vacuous draws redrawn)";
    return o;
}

Outcome ac3(std::mt19937_64& g) {
    Outcome o;
    Checker check{o};
    const PrimeField f(7);
    const std::int64_t max_m = std::min<std::int64_t>(8, f.p() + 1);
    std::uniform_int_distribution<std::size_t> rk(1, 5);
    std::uniform_int_distribution<std::int64_t> deg(-3, 5), mm(0, max_m);
    for (int t = 0; t < 500; ++t) {
        std::vector<std::int64_t> d(rk(g));
        for (auto& x : d) x = deg(g);
        const auto m = mm(g);
        const auto lambda0 = std::accumulate(d.begin(), d.end(), std::int64_t{0}) - m;
        const auto built = hecke::build_curve_filtration(d, lambda0, f);
        if (!check(static_cast<std::int64_t>(built.filtration.length()) == m, "chain length differs from M")) return o;
        if (!check(depth::curve_split_depth(d, lambda0) == depth::DepthResult::of(m), "curve_split_depth differs from M"))
            return o;
        for (std::size_t k = 1; k < built.chain.size(); ++k) {
            const auto& before = built.chain[k - 1];
            const auto& after = built.chain[k];
            if (!check(before.det_degree() - after.det_degree() == 1 && before.dimension() - after.dimension() == 1,
                       "a transform did not drop det degree and dimension by one"))
                return o;
        }
        if (!check(depth::verify_filtration(built.filtration, bundle::SplitBundle::on_curve(d)),
                   "verify_filtration rejected a constructed chain"))
            return o;
        g_filtrations.push_back({built.filtration, DivisorClass::points(1), "curve chain"});

        // the same degrees with lambda0 pushed past the total
        std::uniform_int_distribution<std::int64_t> over(1, 6);
        const auto bad = lambda0 + m + over(g);
        if (!check(depth::curve_split_depth(d, bad).is_no_filtration(), "M < 0 did not give NoFiltration")) return o;
        try {
            hecke::build_curve_filtration(d, bad, f);
            check(false, "build_curve_filtration accepted M < 0");
            return o;
        } catch (const Error& e) {
            if (!check(e.code() == Errc::NegativeM, e.what())) return o;
        }
    }
    if (o.pass) o.detail = "500 chains over F_7 with exact length M, 500 NoFiltration cases";
    return o;
}

Outcome ac4() {
    Outcome o;
    Checker check{o};
    const PrimeField f(7);
    const auto p = ProjPoint::make(f, {1, 0, 0});
    const auto dim = [&](std::uint32_t d, bool through_p) {
        std::vector<agcode::VanishingCondition> c;
        if (through_p) c.push_back({p, 1});
        return agcode::vanishing_basis(d, c, Space::P2, f).dimension();
    };
    const std::size_t d1 = dim(1, true), d2 = dim(2, true), d3 = dim(3, true), d3free = dim(3, false);
    check(d1 == 2, "lines through p: " + std::to_string(d1));
    check(d2 == 5, "conics through p: " + std::to_string(d2));
    check(d3 == 9, "cubics through p: " + std::to_string(d3));
    check(d3free == 10, "all cubics: " + std::to_string(d3free));
    check(d1 + d2 + d3 == 16, "total message dimension is not 16");
    if (o.pass) o.detail = "2, 5, 9, 10 over F_7; 9 + 5 + 2 = 16";
    return o;
}

using Coords = std::vector<std::vector<std::int64_t>>;

// Ten points of P2(F_5) off [1:0:0]; quadrics through [1:0:0] reach d_min 4 on them.
const Coords kPlaneF5{{1, 0, 1}, {1, 0, 4}, {1, 1, 2}, {1, 2, 3}, {1, 2, 4},
                      {1, 3, 1}, {1, 4, 1}, {0, 1, 1}, {0, 1, 3}, {0, 0, 1}};
// Thirteen points of P2(F_7) off [1:0:0] on which cubics through [1:0:0] evaluate injectively.
const Coords kPlaneF7{{1, 0, 4}, {1, 0, 6}, {1, 1, 4}, {1, 2, 0}, {1, 2, 3}, {1, 2, 6}, {1, 3, 3},
                      {1, 5, 4}, {1, 6, 1}, {1, 6, 6}, {0, 1, 4}, {0, 1, 6}, {0, 0, 1}};

/// Forms of each degree through [1:0:0], evaluated at `regular` and at
/// `exceptional` points over [1:0:0].
LinearCode blowup_code(const PrimeField& f, const std::vector<std::uint32_t>& degrees, const Coords& regular,
                       std::size_t exceptional) {
    const auto p = ProjPoint::make(f, {1, 0, 0});
    std::vector<agcode::SectionBasis> bases;
    for (auto d : degrees) bases.push_back(agcode::vanishing_basis(d, {{p, 1}}, Space::P2, f));
    std::vector<EvalPoint> pts;
    for (const auto& q : regular) pts.push_back(EvalPoint::regular(ProjPoint::make(f, q)));
    for (std::size_t e = 0; e < exceptional; ++e) pts.push_back(EvalPoint::on_exceptional(p, e));
    return agcode::build_code(bases, pts, f);
}

Outcome ac5() {
    Outcome o;
    Checker check{o};
    const PrimeField f(5);
    int rs = 0;
    for (std::size_t n = 1; n <= 5; ++n)
        for (std::size_t k = 1; k <= n; ++k) {
            const auto basis = agcode::vanishing_basis(static_cast<std::uint32_t>(k - 1), {}, Space::P1, f);
            std::vector<EvalPoint> pts;
            for (std::size_t a = 0; a < n; ++a) pts.push_back(EvalPoint::regular(ProjPoint::make(f, {1, static_cast<std::int64_t>(a)})));
            const auto c = agcode::build_code({basis}, pts, f);
            const auto d = agcode::min_distance(c);
            const auto oracle = ht::brute_min_distance(c.generator());
            if (!check(c.k() == k && d.value && *d.value == n - k + 1 && oracle == n - k + 1,
                       "Reed-Solomon n=" + std::to_string(n) + " k=" + std::to_string(k) + " is not MDS"))
                return o;
            ++rs;
        }

    const auto code = blowup_code(f, {2}, kPlaneF5, 2);
    check(code.message_dim() == 5 && code.k() == 5, "quadrics through p do not give k = 5");
    const auto d = agcode::min_distance(code);
    check(d.classes == 781, "expected 781 codeword classes, got " + std::to_string(d.classes));
    const auto oracle = ht::brute_min_distance(code.generator());
    check(d.value && *d.value == oracle, "min_distance disagrees with full enumeration");
    check(agcode::zero_blocks(code) == std::vector<std::size_t>{10, 11}, "exceptional blocks are not the zero blocks");
    auto known = code;
    known.set_d_min(oracle);
    const auto [contracted, rep] = agcode::zero_block_contract(known);
    const auto d_after = agcode::min_distance(contracted);
    check(rep.k_before == rep.k_after, "contraction changed k");
    check(d_after.value && *d_after.value == oracle && ht::brute_min_distance(contracted.generator()) == oracle,
          "recomputed d_min changed after contraction");
    check(rep.delta_before && rep.delta_after && *rep.delta_after / *rep.delta_before == Rational(12, 10),
          "delta ratio is not 12/10");
    if (o.pass) {
        std::ostringstream s;
        s << rs << " Reed-Solomon codes MDS; scaled code k=5, d_min=" << oracle << ", delta " << to_string(*rep.delta_before)
          << " -> " << to_string(*rep.delta_after) << " (ratio 6/5)";
        o.detail = s.str();
    }
    return o;
}

Outcome ac6(std::mt19937_64& g) {
    Outcome o;
    Checker check{o};
    int done = 0;
    while (done < 50) {
        const PrimeField f(done % 2 ? 3 : 5);
        std::uniform_int_distribution<std::size_t> rr(1, 3), nn(2, 5), kk(1, 3), zz(1, 3);
        const auto r = rr(g), n = nn(g), k = kk(g), nz = zz(g);
        const auto base = ht::random_matrix(f, k, r * n, g);
        const LinearCode plain(f, r, n, base);
        if (plain.k() == 0 || !agcode::zero_blocks(plain).empty()) continue;

        std::vector<bool> is_zero(n + nz, false);
        for (std::size_t z = 0; z < nz;) {
            const auto pos = std::uniform_int_distribution<std::size_t>(0, n + nz - 1)(g);
            if (!is_zero[pos]) {
                is_zero[pos] = true;
                ++z;
            }
        }
        FMatrix gen(f, k, r * (n + nz));
        for (std::size_t j = 0, src = 0; j < n + nz; ++j) {
            if (is_zero[j]) continue;
            for (std::size_t s = 0; s < r; ++s)
                for (std::size_t row = 0; row < k; ++row) gen.set(row, j * r + s, base.get(row, src * r + s));
            ++src;
        }
        const LinearCode c(f, r, n + nz, gen);
        const auto rep = agcode::mmp_compare(c);
        if (!check(rep.has_value(), "comparison over budget")) return o;
        const auto before = ht::brute_min_distance(c.generator());
        const auto N = static_cast<std::int64_t>(n + nz);
        check(rep->n_zero == nz, "zero block count differs from the injected count");
        check(rep->d_min == before, "d_min changed under contraction");
        check(rep->delta_after > rep->delta_before && rep->strict_improvement, "delta did not strictly improve");
        check(rep->ratio == Rational(N, N - static_cast<std::int64_t>(nz)), "ratio is not N/(N - N_zero)");
        if (!o.pass) return o;
        ++done;
    }
    o.detail = "50 codes: strict improvement, exact ratio, d_min unchanged";
    return o;
}

void record_surface_filtrations() {
    // witnesses from the surface rule on P2 and P1xP1, and a blowup chain from pullbacks
    for (std::int64_t a = 0; a <= 5; ++a)
        for (std::int64_t b = 0; b <= 3; ++b) {
            const auto s = depth::surface_split_depth(bundle::SplitBundle::on_p2({a, b}), DivisorClass::hyperplane(0));
            if (s.witness) g_filtrations.push_back({*s.witness, DivisorClass::hyperplane(1), "P2 witness"});
            const auto L = Lattice::p1xp1();
            const bundle::SplitBundle q({DivisorClass(L, {a, b}), DivisorClass(L, {b, 0})});
            const auto t = depth::surface_split_depth(q, DivisorClass::zero(L));
            if (t.witness) g_filtrations.push_back({*t.witness, DivisorClass(L, {1, 1}), "P1xP1 witness"});
        }
}

Outcome ac7() {
    Outcome o;
    Checker check{o};
    record_surface_filtrations();
    std::size_t strict_steps = 0;
    for (const auto& rec : g_filtrations) {
        const auto& filt = rec.filtration;
        const auto slopes = depth::slope_sequence(filt, rec.polarization);
        for (std::size_t i = 1; i < slopes.size(); ++i) {
            const auto pairing = picard::intersect(filt.increments[i - 1], rec.polarization);
            if (!check(slopes[i] >= slopes[i - 1], rec.origin + ": slope decreased")) return o;
            if (pairing > 0) {
                if (!check(slopes[i] > slopes[i - 1], rec.origin + ": slope did not increase strictly")) return o;
                ++strict_steps;
            }
        }
        const auto kind = filt.lambda0.lattice().kind();
        if (kind == picard::LatticeKind::Curve || kind == picard::LatticeKind::P2) {
            const auto dets = filt.determinants();
            const auto bound = depth::rank_one_bound(dets.back().total(), filt.lambda0.total());
            if (!check(static_cast<std::int64_t>(filt.length()) <= bound, rec.origin + ": length exceeds d - d0")) return o;
        }
    }
    o.detail = std::to_string(g_filtrations.size()) + " filtrations, " + std::to_string(strict_steps) +
               " strictly increasing steps, rank-one bound never exceeded";
    return o;
}

Outcome ac8() {
    Outcome o;
    Checker check{o};
    // the three-summand code on the blowup of P2 over F_7
    const PrimeField f7(7);
    const auto big = blowup_code(f7, {3, 2, 1}, kPlaneF7, 5);
    check(big.length() == 54, "full code does not have length 54");
    check(big.message_dim() == 16 && big.k() == 16, "full code does not have k = 16");
    const auto d = agcode::min_distance(big);
    check(d.infeasible(), "min_distance on k = 16 over F_7 should be infeasible under the default budget");
    check(d.classes > agcode::kDefaultBudget, "class count within budget");
    check(!agcode::mmp_compare(big).has_value(), "comparison on the full code should be infeasible");

    // cubics through p over F_5: 10 regular points, 2 exceptional
    const PrimeField f5(5);
    const auto code = blowup_code(f5, {3}, kPlaneF5, 2);
    check(code.message_dim() == 9, "cubics through p have dimension " + std::to_string(code.message_dim()) + ", not 9");
    check(code.message_dim() != 6, "dimension 6 unexpectedly reproduced");
    check(agcode::zero_blocks(code) == std::vector<std::size_t>{10, 11}, "exceptional coordinates are not identically zero");
    const auto rep = agcode::mmp_compare(code);
    check(rep.has_value() && rep->ratio == Rational(12, 10) && rep->strict_improvement, "delta ratio is not 12/10");
    if (o.pass) {
        std::ostringstream s;
        s << "k=16 over F_7 needs " << d.classes << " classes: infeasible; cubic code dim 9 (6 does not reproduce), d_min "
          << rep->d_min << " (4 does not reproduce), ratio 6/5";
        o.detail = s.str();
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    ht::consume_seed_flag(argc, argv);
    std::cout << "seed " << ht::seed() << "\n";

    struct Criterion {
        const char* id;
        const char* title;
        double limit_s;
        std::function<Outcome()> run;
    };
    auto g2 = ht::rng(2), g3 = ht::rng(3), g6 = ht::rng(6);
    const std::vector<Criterion> all{
        {"AC1", "depth formulas", 1, [] { return ac1(); }},
        {"AC2", "transform commutation", 30, [&] { return ac2(g2); }},
        {"AC3", "constructive curve depth", 60, [&] { return ac3(g3); }},
        {"AC4", "vanishing dimensions", 5, [] { return ac4(); }},
        {"AC5", "code pipeline", 10, [] { return ac5(); }},
        {"AC6", "strict improvement", 30, [&] { return ac6(g6); }},
        {"AC7", "slope monotonicity", 5, [] { return ac7(); }},
        {"AC8", "scale limits", 30, [] { return ac8(); }},
    };

    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (out.pass && secs > c.limit_s) out = {false, "took longer than " + std::to_string(c.limit_s) + " s"};
        if (!out.pass) ++failed;
        std::printf("%s %s  %-26s %7.3fs  %s\n", c.id, out.pass ? "PASS" : "FAIL", c.title, secs, out.detail.c_str());
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << "\n";
    return failed ? 1 : 0;
}
