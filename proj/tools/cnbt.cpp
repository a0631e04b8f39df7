#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cnbt/cnbt.hpp"

using namespace cnbt;

namespace {

// Each unordered pair is joined with probability p, then made forward,
// backward or bidirected with equal probability.
DirectedGraph random_mixed_graph(Vertex n, double p, std::uint64_t seed) {
  const CounterRng rng(seed);
  std::vector<Edge> edges;
  std::uint64_t k = 0;
  for (Vertex a = 0; a < n; ++a) {
    for (Vertex b = a + 1; b < n; ++b, ++k) {
      if (rng.uniform(stream::kPair, k) >= p) continue;
      const auto kind = rng.bits(stream::kOrientation, k) % 3;
      if (kind != 1) edges.push_back({a, b});
      if (kind != 0) edges.push_back({b, a});
    }
  }
  return DirectedGraph(n, std::move(edges));
}

Vertex graph_size(std::uint64_t i, Vertex max_n) { return static_cast<Vertex>(2 + i % static_cast<std::uint64_t>(max_n - 1)); }

Complex alpha_for(std::uint64_t i) {
  static const int orders[] = {4, 3, 5};
  return UnitRoot::primitive(orders[i % 3]).alpha;
}

std::vector<Complex> sample_points(const CounterRng& rng, std::uint64_t base, int count) {
  std::vector<Complex> u;
  for (int j = 0; j < count; ++j) {
    const auto c = base * 64 + static_cast<std::uint64_t>(j);
    u.push_back(std::polar(0.5 * rng.uniform(10, c), 2.0 * std::numbers::pi * rng.uniform(11, c)));
  }
  return u;
}

int report(const char* what, double value, double tol) {
  const bool ok = value <= tol;
  std::printf("%s: max=%.3e tol=%.0e %s\n", what, value, tol, ok ? "PASS" : "FAIL");
  return ok ? 0 : 1;
}

int verify(const std::string& suite, int count, Vertex max_n, std::uint64_t seed) {
  const CounterRng rng(seed);
  if (suite == "ihara") {
    double worst = 0;
    for (int i = 0; i < count; ++i) {
      const DirectedGraph g = random_mixed_graph(graph_size(i, max_n), 0.1 + 0.2 * (i % 3), rng.bits(1, i));
      worst = std::max(worst, verify_ihara(g, alpha_for(i), sample_points(rng, i, 20)));
    }
    return report("ihara relative discrepancy", worst, 1e-8);
  }
  if (suite == "walks") {
    max_n = std::min<Vertex>(max_n, 8);
    double worst_p = 0, worst_q = 0, worst_tr = 0;
    for (int i = 0; i < count; ++i) {
      const DirectedGraph g = random_mixed_graph(graph_size(i, max_n), 0.4, rng.bits(2, i));
      const UnitRoot r = UnitRoot::from(alpha_for(i));
      const WalkCountTables t = count_walk_tables(g, 6, r.R);
      const auto rk = r_k_via_recurrence(hermitian_adjacency(g, r.alpha).dense(), degree_vector(g), 5);
      for (int k = 1; k <= 5; ++k) worst_p = std::max(worst_p, (rk[k] - weighted_walk_sum(t.P[k], r)).cwiseAbs().maxCoeff());
      const Eigen::MatrixXcd B = cnbt_matrix(g, r.alpha).dense();
      if (B.rows() == 0) continue;
      const auto series = zeta_log_series(t, r, 6);
      Eigen::MatrixXcd Bk = Eigen::MatrixXcd::Identity(B.rows(), B.cols());
      for (int k = 1; k <= 6; ++k) {
        Bk = Bk * B;
        worst_q = std::max(worst_q, (Bk - weighted_walk_sum(t.Q[k], r)).cwiseAbs().maxCoeff());
        worst_tr = std::max(worst_tr, std::abs(Bk.trace() - series[k]));
      }
    }
    return report("r_k vs P tables", worst_p, 1e-9) | report("B_alpha^k vs Q tables", worst_q, 1e-9) |
           report("trace vs tailless cycle counts", worst_tr, 1e-7);
  }
  if (suite == "theorem1") {
    double worst = 0, worst_pair = 0;
    for (int i = 0; i < count; ++i) {
      const DirectedGraph g = random_mixed_graph(graph_size(i, max_n), 0.3, rng.bits(3, i));
      const CnbtMatrix c = cnbt_matrix(g, alpha_for(i));
      Eigen::VectorXcd x(static_cast<Eigen::Index>(c.dim()));
      for (Eigen::Index e = 0; e < x.size(); ++e) {
        const auto k = static_cast<std::uint64_t>(i) * 4096 + static_cast<std::uint64_t>(e);
        x(e) = Complex(rng.uniform(4, k) - 0.5, rng.uniform(5, k) - 0.5);
      }
      worst = std::max(worst, verify_edge_to_node(g, alpha_for(i), x) / (1.0 + x.norm()));
      if (c.dim() == 0 || c.dim() > 400) continue;
      const ReducedMatrix r = reduced_matrix(g, alpha_for(i));
      const EigenPairs p = eigendecompose(c.dense(), static_cast<Eigen::Index>(c.dim()));
      for (std::size_t j = 0; j < p.size(); ++j) {
        const TransferResult t = eigpair_transfer(c, r, g.num_vertices(), p.values[j], p.vectors.col(static_cast<Eigen::Index>(j)));
        if (!t.flagged) worst_pair = std::max(worst_pair, t.residual);
      }
    }
    return report("intertwining residual / (1 + |g|)", worst, 1e-10) | report("eigenpair transfer residual", worst_pair, 1e-7);
  }
  if (suite == "lemma3") {
    double worst = 0;
    for (int K = 3; K <= 8; ++K) {
      for (int i = 0; i < count; ++i) {
        const auto k = static_cast<std::uint64_t>(K) * 1000 + static_cast<std::uint64_t>(i);
        const double e = 0.505 + 0.49 * rng.uniform(6, k);
        const double g = 0.05 + rng.uniform(7, k), f = g + 0.05 + rng.uniform(8, k);
        for (const CirculantPattern& p : {make_t1(K, e), make_t2(K, f, g)}) {
          std::vector<Complex> closed = circulant_spectrum(p);
          const Eigen::VectorXcd numeric = p.matrix().cast<Complex>().eigenvalues();
          // Greedy matching is enough: the spectra are small and well separated.
          for (Eigen::Index a = 0; a < numeric.size(); ++a) {
            auto it = std::min_element(closed.begin(), closed.end(),
                                       [&](Complex x, Complex y) { return std::abs(x - numeric(a)) < std::abs(y - numeric(a)); });
            worst = std::max(worst, std::abs(*it - numeric(a)));
            closed.erase(it);
          }
        }
      }
    }
    return report("closed-form vs numeric circulant spectra", worst, 1e-10);
  }
  throw InvalidInput("unknown verify suite '" + suite + "' (expected ihara, walks, theorem1 or lemma3)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex non-backtracking spectral tools for directed graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "Seed for all randomness")->capture_default_str();

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a graph from a block model");
  std::string model = "sparse-dsbm", graph_out, labels_out;
  Vertex n = 300;
  int K = 3;
  double p = 0.05, eta = 1.0, c = 5.0, epsilon = 4.0, pareto = 2.5;
  gen->add_option("--model", model, "dense-dsbm | sparse-dsbm | dcsbm")->capture_default_str();
  gen->add_option("-n,--nodes", n, "Number of vertices")->capture_default_str();
  gen->add_option("-K,--clusters", K, "Number of clusters")->capture_default_str();
  gen->add_option("-p", p, "Edge probability (dense-dsbm)")->capture_default_str();
  gen->add_option("--eta", eta, "Orientation noise (dense) or reverse/intra ratio (sparse)")->capture_default_str();
  gen->add_option("-c", c, "Expected degree (sparse models)")->capture_default_str();
  gen->add_option("--epsilon", epsilon, "correct/reverse ratio (sparse models)")->capture_default_str();
  gen->add_option("--pareto-exponent", pareto, "Degree-correction tail exponent (dcsbm)")->capture_default_str();
  gen->add_option("-o,--out", graph_out, "Edge-list output path")->required();
  gen->add_option("--labels", labels_out, "Ground-truth label output path");

  // cluster
  auto* clu = app.add_subcommand("cluster", "Cluster a graph read from an edge list");
  std::string graph_in, method_id = "cnbt-out", truth_in, assign_out;
  bool direct = false;
  int restarts = 10;
  clu->add_option("-g,--graph", graph_in, "Edge-list path")->required()->check(CLI::ExistingFile);
  clu->add_option("-K,--clusters", K, "Number of clusters")->required();
  clu->add_option("-m,--method", method_id, "cnbt-out | cnbt-in | herm | simpleherm | ddsym | disim")->capture_default_str();
  clu->add_flag("--direct", direct, "CNBT methods: use B_alpha instead of the reduced 2n matrix");
  clu->add_option("--kmeans-restarts", restarts, "k-means++ restarts")->capture_default_str();
  clu->add_option("--truth", truth_in, "Ground-truth labels; prints ARI")->check(CLI::ExistingFile);
  clu->add_option("-o,--out", assign_out, "Write labels here instead of stdout");

  // verify
  auto* ver = app.add_subcommand("verify", "Run an identity check on random graphs");
  std::string suite;
  int count = 50;
  Vertex max_n = 12;
  ver->add_option("suite", suite, "ihara | walks | theorem1 | lemma3")->required();
  ver->add_option("--count", count, "Number of random instances")->capture_default_str();
  ver->add_option("--max-n", max_n, "Largest graph size")->capture_default_str()->check(CLI::Range(2, 64));

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a configured sweep and write CSV");
  std::string config_path, csv_out;
  std::optional<int> threads;
  bool keep_going = false, no_wall = false;
  exp->add_option("config", config_path, "JSON configuration")->required()->check(CLI::ExistingFile);
  exp->add_option("-o,--out", csv_out, "CSV output path (overrides the config)");
  exp->add_option("--threads", threads, "Worker threads (overrides the config)");
  exp->add_flag("--keep-going", keep_going, "Exit 0 even if some trials errored");
  exp->add_flag("--no-wall-time", no_wall, "Leave the wall_ms column empty");

  // spectra
  auto* spe = app.add_subcommand("spectra", "Print leading eigenvalues of a graph matrix");
  std::string which = "reduced";
  int order = 4, top = 10;
  spe->add_option("-g,--graph", graph_in, "Edge-list path")->required()->check(CLI::ExistingFile);
  spe->add_option("--matrix", which, "reduced | cnbt | hermitian")->capture_default_str();
  spe->add_option("-R,--order", order, "alpha = exp(2 pi i / R)")->capture_default_str()->check(CLI::Range(1, 64));
  spe->add_option("-k,--top", top, "Number of eigenvalues (largest real part)")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto kind = parse_model(model);
      if (!kind) throw InvalidInput("unknown model '" + model + "'");
      SbmSample s;
      if (*kind == ModelKind::DenseDsbm) {
        s = dense_dsbm_sample(DenseDsbmParams{K, n, p, eta, std::nullopt}, seed);
      } else {
        SparseSbmParams sp;
        sp.K = K;
        sp.n = n;
        sp.c = c;
        sp.epsilon = epsilon;
        sp.eta = eta;
        sp.pareto_exponent = pareto;
        s = sparse_sbm_sample(sp, *kind == ModelKind::Dcsbm ? SparseModel::Dcsbm : SparseModel::Dsbm, seed);
      }
      for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
      io::write_edge_list(s.graph, graph_out);
      if (!labels_out.empty()) io::write_labels(s.labels, labels_out);
      std::cerr << "wrote " << s.graph.num_vertices() << " vertices, " << s.graph.num_edges() << " edges\n";
      return 0;
    }
    if (*clu) {
      const auto m = parse_method(method_id);
      if (!m) throw InvalidInput("unknown method '" + method_id + "'");
      const DirectedGraph g = io::read_edge_list(graph_in);
      ClusteringOptions opt;
      opt.seed = seed;
      opt.kmeans_restarts = restarts;
      if (direct) opt.path = EigenPath::Direct;
      const ClusteringRun run = cluster(g, K, *m, opt);
      if (run.degenerate) std::cerr << "warning: embedding is degenerate (all eigenvalues ~ 0)\n";
      if (run.zero_rows) std::cerr << "warning: " << run.zero_rows << " zero rows in the embedding\n";
      if (assign_out.empty()) {
        io::write_labels(run.labels, std::cout);
      } else {
        io::write_labels(run.labels, assign_out);
      }
      if (!truth_in.empty()) std::cerr << "ARI " << ari(run.labels, io::read_labels(truth_in)) << '\n';
      return 0;
    }
    if (*ver) return verify(suite, count, max_n, seed);
    if (*exp) {
      ExperimentConfig cfg = load_config(config_path);
      if (threads) cfg.threads = *threads;
      if (!csv_out.empty()) cfg.output = csv_out;
      cfg.validate();
      // Open the destination first so a bad path fails before the sweep.
      std::ofstream file;
      const bool to_stdout = cfg.output.empty() || cfg.output == "-";
      if (!to_stdout) {
        const std::filesystem::path parent = std::filesystem::path(cfg.output).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
        file.open(cfg.output);
        if (!file) throw InvalidInput("cannot open '" + cfg.output + "' for writing");
      }
      const ExperimentReport r = run_experiment(cfg);
      write_csv(r.rows, to_stdout ? std::cout : file, !no_wall);
      std::cerr << r.rows.size() << " rows, " << r.errors << " errored\n";
      return r.errors == 0 || keep_going ? 0 : 1;
    }
    if (*spe) {
      const DirectedGraph g = io::read_edge_list(graph_in);
      const Complex alpha = UnitRoot::primitive(order).alpha;
      SparseC M;
      if (which == "reduced") {
        M = reduced_matrix(g, alpha).K;
      } else if (which == "cnbt") {
        M = cnbt_matrix(g, alpha).B_alpha;
      } else if (which == "hermitian") {
        M = hermitian_adjacency(g, alpha).A;
      } else {
        throw InvalidInput("unknown matrix '" + which + "'");
      }
      const auto k = std::min<Eigen::Index>(top, M.rows());
      if (k == 0) return 0;
      const EigenPairs pairs = eigendecompose(M, k);
      for (const Complex& v : pairs.values) std::printf("%.12g\t%.12g\n", v.real(), v.imag());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
