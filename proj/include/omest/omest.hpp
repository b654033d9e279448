#pragma once

#include <omest/batch.hpp>
#include <omest/classical.hpp>
#include <omest/errors.hpp>
#include <omest/gammafn.hpp>
#include <omest/moment.hpp>
#include <omest/moments.hpp>
#include <omest/posterior.hpp>
#include <omest/render.hpp>
#include <omest/rng.hpp>
#include <omest/scenario.hpp>
#include <omest/search_counts.hpp>
#include <omest/simulate.hpp>
