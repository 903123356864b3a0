#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ptspectra/sweep.hpp"

namespace ptspectra {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

Json to_json(const PotentialSpec& spec);
/// {"family": ..., parameters...}; missing parameters take the family defaults.
PotentialSpec spec_from_json(const Json& j);

Json to_json(const Rect& rect);
/// {"re": [lo, hi], "im": [lo, hi]}
Rect rect_from_json(const Json& j);

/// {"start", "stop", "num"} or an explicit array of values.
std::vector<double> grid_from_json(const Json& j);

RootOptions root_options_from_json(const Json& j, RootOptions base);

enum class OutputFormat { csv, json };

struct RunConfig {
  std::string command;
  std::optional<PotentialSpec> spec;
  std::optional<Rect> rect;
  std::string axis = "a";
  std::vector<double> grid;
  int n_levels = 2;
  int rescan_every = 10;
  int max_bisections = 8;
  /// Parameter overrides that turn the spec into the containment reference.
  std::optional<Json> reference;
  SolverOptions solver;
  Json roots = Json::object();
  TransitionOptions transition;
  std::optional<double> oracle_L;
  int oracle_n = 8000;
  std::string preset;
  std::string out;
  OutputFormat format = OutputFormat::csv;
};

/// Throws ConfigError on unknown fields, wrong types or invalid values.
RunConfig parse_config(const Json& j);
Json to_json(const RunConfig& config);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);

/// Hash of the canonical serialization.
std::string config_hash(const Json& canonical);

struct SweepJob {
  std::string label;
  SweepPlan plan;
  std::optional<SweepPlan> reference;
  TransitionOptions transition;
};

Json to_json(const SweepPlan& plan);
Json to_json(const SweepJob& job);

SweepJob sweep_job(const RunConfig& config);

struct SweepRow {
  double lambda = 0.0;
  int branch_id = 0;
  double re_E = 0.0;
  double im_E = 0.0;
  double residual = 0.0;
  std::string classification;
  std::optional<int> pair_id;

  bool operator==(const SweepRow&) const = default;
};

/// Rows sorted by (lambda, branch_id); pair_id is set on the complex points only.
std::vector<SweepRow> sweep_rows(const std::vector<Branch>& branches, double real_axis_tol = 1e-9);

Json to_json(const SweepRow& row);
SweepRow sweep_row_from_json(const Json& j);

Json to_json(const EPResult& ep);
EPResult ep_from_json(const Json& j);
Json to_json(const TransitionReport& report);
TransitionReport transition_from_json(const Json& j);
Json to_json(const DoubletReport& d);

/// %.12e
std::string format_real(double x);

inline constexpr const char* kSweepHeader =
    "lambda,branch_id,re_E,im_E,residual,classification,pair_id";
inline constexpr const char* kRootHeader = "index,re_E,im_E,residual,classification,pair_id";

std::string sweep_csv(const std::vector<SweepRow>& rows);

/// {rows, transition, transitions, meta}. `transition` is the lowest doublet's report.
Json sweep_document(const SweepResult& result, const Json& meta, double real_axis_tol = 1e-9);
std::string render_sweep(const SweepResult& result, const Json& meta, OutputFormat format,
                         double real_axis_tol = 1e-9);

Json roots_document(const std::vector<Root>& roots, const Json& meta);
std::string render_roots(const std::vector<Root>& roots, const Json& meta, OutputFormat format);

Json meta_json(const Json& canonical_config);

}  // namespace ptspectra
