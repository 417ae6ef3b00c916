#pragma once

#include "t2vbench/error.hpp"
#include "t2vbench/core_model.hpp"
#include "t2vbench/image.hpp"
#include "t2vbench/frame_sampler.hpp"
#include "t2vbench/perception.hpp"
#include "t2vbench/fixture_store.hpp"
#include "t2vbench/http_sidecar.hpp"
#include "t2vbench/geometry_metrics.hpp"
#include "t2vbench/motion_metric.hpp"
#include "t2vbench/rubric_templates.hpp"
#include "t2vbench/mllm_metrics.hpp"
#include "t2vbench/rank_correlation.hpp"
#include "t2vbench/score_record.hpp"
#include "t2vbench/bench_runner.hpp"
#include "t2vbench/report.hpp"
