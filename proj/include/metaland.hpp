#pragma once

#include "metaland/core/date.hpp"
#include "metaland/core/decimal.hpp"
#include "metaland/core/error.hpp"
#include "metaland/core/platform.hpp"
#include "metaland/core/types.hpp"
#include "metaland/core/validate.hpp"

#include "metaland/ingest/files.hpp"
#include "metaland/ingest/manifest.hpp"
#include "metaland/ingest/metadata.hpp"
#include "metaland/ingest/parse.hpp"
#include "metaland/ingest/records.hpp"
#include "metaland/ingest/synthetic.hpp"

#include "metaland/analytics/aggregate.hpp"
#include "metaland/analytics/breakdown.hpp"
#include "metaland/analytics/correlation.hpp"
#include "metaland/analytics/filter.hpp"
#include "metaland/analytics/seasonal.hpp"
#include "metaland/analytics/spearman.hpp"

#include "metaland/valuation/evaluate.hpp"
#include "metaland/valuation/features.hpp"
#include "metaland/valuation/gbt.hpp"
#include "metaland/valuation/model_io.hpp"
#include "metaland/valuation/schema.hpp"
#include "metaland/valuation/search.hpp"

#include "metaland/viewgen/view.hpp"

#include "metaland/service/api.hpp"
#include "metaland/service/pipeline.hpp"
#include "metaland/service/snapshot.hpp"
