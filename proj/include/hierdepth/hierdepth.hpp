#pragma once

#include "hierdepth/agcode.hpp"
#include "hierdepth/bundle.hpp"
#include "hierdepth/depth.hpp"
#include "hierdepth/error.hpp"
#include "hierdepth/gf.hpp"
#include "hierdepth/hecke.hpp"
#include "hierdepth/picard.hpp"
