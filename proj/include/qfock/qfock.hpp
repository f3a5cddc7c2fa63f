#pragma once

#include "qfock/error.hpp"
#include "qfock/qpoly.hpp"
#include "qfock/qrat.hpp"
#include "qfock/context.hpp"
#include "qfock/qnum.hpp"
#include "qfock/series.hpp"
#include "qfock/report.hpp"
#include "qfock/series_identities.hpp"
#include "qfock/stirling.hpp"
#include "qfock/spaces.hpp"
#include "qfock/transform.hpp"
#include "qfock/realization.hpp"
