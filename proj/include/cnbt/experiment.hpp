#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "cnbt/clustering.hpp"
#include "cnbt/error.hpp"
#include "cnbt/metrics.hpp"
#include "cnbt/sbm.hpp"

namespace cnbt {

enum class ModelKind : std::uint8_t { DenseDsbm, SparseDsbm, Dcsbm };

inline std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::DenseDsbm: return "dense-dsbm";
    case ModelKind::SparseDsbm: return "sparse-dsbm";
    case ModelKind::Dcsbm: return "dcsbm";
  }
  return "?";
}

inline std::optional<ModelKind> parse_model(std::string_view s) {
  for (ModelKind m : {ModelKind::DenseDsbm, ModelKind::SparseDsbm, ModelKind::Dcsbm}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

/// One point of the parameter grid. Unused axes hold NaN.
struct GridPoint {
  double p = std::nan("");
  double eta = std::nan("");
  double c = std::nan("");
  double epsilon = std::nan("");
};

struct ExperimentConfig {
  ModelKind model = ModelKind::DenseDsbm;
  Vertex n = 0;
  int K = 0;
  std::vector<double> p, eta, c, epsilon;
  double pareto_exponent = 2.5;
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds;
  int threads = 0;  // 0: hardware concurrency
  int kmeans_restarts = 10;
  std::string output;

  bool dense() const { return model == ModelKind::DenseDsbm; }

  /// Full factorial in a fixed order: p, eta (dense) or c, epsilon, eta (sparse).
  std::vector<GridPoint> grid() const {
    std::vector<GridPoint> out;
    if (dense()) {
      for (double pv : p)
        for (double e : eta) out.push_back({pv, e, std::nan(""), std::nan("")});
    } else {
      for (double cv : c)
        for (double ev : epsilon)
          for (double e : eta) out.push_back({std::nan(""), e, cv, ev});
    }
    return out;
  }

  /// Throws InvalidInput naming the first offending field.
  void validate() const {
    using detail::require;
    require(n > 0, "config: n must be positive");
    require(K >= 2, "config: K must be at least 2");
    require(n % K == 0, "config: n must be divisible by K");
    require(!methods.empty(), "config: methods must be non-empty");
    require(!seeds.empty(), "config: seeds must be non-empty");
    require(!eta.empty(), "config: eta grid must be non-empty");
    require(kmeans_restarts >= 1, "config: kmeans_restarts must be positive");
    require(threads >= 0, "config: threads must be non-negative");
    if (dense()) {
      require(K >= 3, "config: dense-dsbm uses the circular orientation matrix, which needs K >= 3");
      require(!p.empty(), "config: p grid must be non-empty for dense-dsbm");
      for (double v : p) require(v >= 0.0 && v <= 1.0, "config: p values must lie in [0, 1]");
      for (double v : eta) require(v >= 0.0 && v <= 0.5, "config: eta values must lie in [0, 0.5] for dense-dsbm");
    } else {
      require(!c.empty(), "config: c grid must be non-empty for sparse models");
      require(!epsilon.empty(), "config: epsilon grid must be non-empty for sparse models");
      for (double v : c) require(v > 0.0, "config: c values must be positive");
      for (double v : epsilon) require(v > 0.0, "config: epsilon values must be positive");
      for (double v : eta) require(v > 0.0, "config: eta values must be positive for sparse models");
      require(pareto_exponent > 0.0, "config: pareto_exponent must be positive");
    }
  }
};

namespace detail {

inline std::vector<double> number_or_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return {};
  const auto& v = j.at(key);
  if (v.is_number()) return {v.get<double>()};
  require(v.is_array(), std::string("config: '") + key + "' must be a number or a list of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    require(x.is_number(), std::string("config: '") + key + "' must contain only numbers");
    out.push_back(x.get<double>());
  }
  require(!out.empty(), std::string("config: '") + key + "' grid is empty");
  return out;
}

}  // namespace detail

/// Parses and validates. Schema:
///   model            "dense-dsbm" | "sparse-dsbm" | "dcsbm"
///   n, K             integers
///   p, eta, c, epsilon   number or list (sweep axes)
///   pareto_exponent  number, dcsbm only (default 2.5)
///   methods          list of method ids
///   seeds            count (seeds 0..count-1) or explicit list
///   threads, kmeans_restarts, output   optional
inline ExperimentConfig parse_config(const nlohmann::json& j) {
  using detail::require;
  require(j.is_object(), "config: top level must be an object");
  static const char* known[] = {"model", "n",     "K",       "p",       "eta",           "c",
                                "epsilon", "pareto_exponent", "methods", "seeds", "threads",
                                "kmeans_restarts", "output"};
  for (const auto& [key, _] : j.items()) {
    require(std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) !=
                std::end(known),
            "config: unknown key '" + key + "'");
  }
  ExperimentConfig cfg;
  try {
    const auto model = parse_model(j.at("model").get<std::string>());
    require(model.has_value(), "config: unknown model '" + j.at("model").get<std::string>() + "'");
    cfg.model = *model;
    cfg.n = j.at("n").get<Vertex>();
    cfg.K = j.at("K").get<int>();
    cfg.p = detail::number_or_list(j, "p");
    cfg.eta = detail::number_or_list(j, "eta");
    cfg.c = detail::number_or_list(j, "c");
    cfg.epsilon = detail::number_or_list(j, "epsilon");
    cfg.pareto_exponent = j.value("pareto_exponent", 2.5);
    for (const auto& m : j.at("methods")) {
      const auto id = m.get<std::string>();
      const auto method = parse_method(id);
      require(method.has_value(), "config: unknown method id '" + id + "'");
      cfg.methods.push_back(*method);
    }
    const auto& seeds = j.at("seeds");
    if (seeds.is_number_integer()) {
      const auto count = seeds.get<std::int64_t>();
      require(count >= 1, "config: seed count must be positive");
      for (std::int64_t s = 0; s < count; ++s) cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    } else {
      cfg.seeds = seeds.get<std::vector<std::uint64_t>>();
    }
    cfg.threads = j.value("threads", 0);
    cfg.kmeans_restarts = j.value("kmeans_restarts", 10);
    cfg.output = j.value("output", std::string());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config " + path);
  try {
    return parse_config(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("config " + path + ": " + e.what());
  }
}

struct ResultRow {
  ModelKind model = ModelKind::DenseDsbm;
  Vertex n = 0;
  int K = 0;
  GridPoint point;
  Method method = Method::CnbtOut;
  std::uint64_t seed = 0;
  double ari = std::nan("");  // NaN when the trial errored
  double wall_ms = 0.0;
  std::vector<std::string> flags;
  bool error = false;
};

inline constexpr const char* kCsvHeader = "model,n,K,p,eta,c,epsilon,method,seed,ari,wall_ms,flags";

namespace detail {

inline std::string fmt_num(double x) {
  if (std::isnan(x)) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string csv_safe(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"' || ch == ';') ch = ' ';
  }
  return s;
}

}  // namespace detail

/// One CSV line (no newline). Empty fields for unused axes; flags are
/// ';'-separated.
inline std::string csv_line(const ResultRow& r, bool with_wall_time = true) {
  std::string flags;
  for (const auto& f : r.flags) {
    if (!flags.empty()) flags += ';';
    flags += detail::csv_safe(f);
  }
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
  std::string line;
  line += std::string(to_string(r.model)) + ',' + std::to_string(r.n) + ',' + std::to_string(r.K) + ',';
  line += detail::fmt_num(r.point.p) + ',' + detail::fmt_num(r.point.eta) + ',' + detail::fmt_num(r.point.c) + ',' +
          detail::fmt_num(r.point.epsilon) + ',';
  line += std::string(to_string(r.method)) + ',' + std::to_string(r.seed) + ',' + detail::fmt_num(r.ari) + ',';
  line += (with_wall_time ? std::string(wall) : std::string()) + ',' + flags;
  return line;
}

inline void write_csv(const std::vector<ResultRow>& rows, std::ostream& out, bool with_wall_time = true) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) out << csv_line(r, with_wall_time) << '\n';
}

/// Samples the graph for one grid point and seed.
inline SbmSample sample_for(const ExperimentConfig& cfg, const GridPoint& pt, std::uint64_t seed) {
  if (cfg.dense()) {
    DenseDsbmParams params;
    params.K = cfg.K;
    params.n = cfg.n;
    params.p = pt.p;
    params.eta = pt.eta;
    return dense_dsbm_sample(params, seed);
  }
  SparseSbmParams params;
  params.K = cfg.K;
  params.n = cfg.n;
  params.c = pt.c;
  params.epsilon = pt.epsilon;
  params.eta = pt.eta;
  params.pareto_exponent = cfg.pareto_exponent;
  return sparse_sbm_sample(params, cfg.model == ModelKind::Dcsbm ? SparseModel::Dcsbm : SparseModel::Dsbm, seed);
}

struct ExperimentReport {
  std::vector<ResultRow> rows;
  int errors = 0;
};

/// Runs grid x seeds x methods. Each (grid point, seed) is one task sharing
/// a sampled graph across methods; rows come back in config order.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<GridPoint> grid = cfg.grid();
  const std::size_t tasks = grid.size() * cfg.seeds.size();
  const std::size_t per_task = cfg.methods.size();
  ExperimentReport report;
  report.rows.resize(tasks * per_task);

  auto run_task = [&](std::size_t t) {
    const GridPoint& pt = grid[t / cfg.seeds.size()];
    const std::uint64_t seed = cfg.seeds[t % cfg.seeds.size()];
    std::optional<SbmSample> sample;
    std::string sample_error;
    try {
      sample = sample_for(cfg, pt, seed);
    } catch (const std::exception& e) {
      sample_error = e.what();
    }
    for (std::size_t mi = 0; mi < per_task; ++mi) {
      ResultRow& row = report.rows[t * per_task + mi];
      row.model = cfg.model;
      row.n = cfg.n;
      row.K = cfg.K;
      row.point = pt;
      row.method = cfg.methods[mi];
      row.seed = seed;
      if (!sample) {
        row.error = true;
        row.flags.push_back("error=sampling: " + sample_error);
        continue;
      }
      if (sample->clip_fraction > kClipWarningFraction) row.flags.push_back("clip=" + detail::fmt_num(sample->clip_fraction));
      const auto start = std::chrono::steady_clock::now();
      try {
        ClusteringOptions opt;
        opt.seed = seed;
        opt.kmeans_restarts = cfg.kmeans_restarts;
        const ClusteringRun run = cluster(sample->graph, cfg.K, row.method, opt);
        row.ari = ari(run.labels, sample->labels);
        if (run.degenerate) row.flags.push_back("degenerate");
        if (run.zero_rows > 0) row.flags.push_back("zero_rows=" + std::to_string(run.zero_rows));
      } catch (const std::exception& e) {
        row.error = true;
        row.flags.push_back(std::string("error=") + e.what());
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  };

  unsigned workers = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1U, static_cast<unsigned>(std::max<std::size_t>(tasks, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks;) run_task(t);
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto& r : report.rows) report.errors += r.error ? 1 : 0;
  return report;
}

}  // namespace cnbt
