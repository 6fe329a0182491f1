// resonancedb: command-line front end for the pattern store.
//
// Exit codes: 0 success, 1 data/validation failure, 2 state conflict,
// 64 usage error. Data goes to stdout, diagnostics to stderr.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resonance/resonance.hpp"

namespace fs = std::filesystem;
using namespace resonance;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitConflict = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& s, const char* what) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(s)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(item.c_str(), &end, 10);
    if (end != item.c_str() + item.size() || v == 0) {
      throw UsageError(std::string("bad ") + what + " '" + item + "'");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw UsageError(std::string(what) + " list is empty");
  return out;
}

bool write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  os << content;
  return static_cast<bool>(os);
}

// ---------------------------------------------------------------------------

struct InitArgs {
  std::string db;
  std::uint32_t dim = 0;
  std::uint32_t segment_records = kDefaultSegmentRecords;
};

int cmd_init(const InitArgs& a) {
  if (a.dim == 0) throw UsageError("--dim must be at least 1");
  if (a.segment_records == 0) throw UsageError("--segment-records must be at least 1");
  if (!Store::list_segment_files(a.db).empty()) {
    std::cerr << "store already exists at '" << a.db << "'\n";
    return kExitConflict;
  }
  const Store store(a.db, a.dim, a.segment_records);
  std::cout << "initialized " << a.db << " dim=" << store.dim() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string db;
  std::string input;
  std::string map = "sign-phase";
  std::string input_format = "jsonl";
  std::uint32_t dim = 0;
};

int cmd_ingest(const IngestArgs& a) {
  const MapMode mode = parse_map_mode(a.map);
  Store store{fs::path(a.db)};

  std::ifstream file;
  std::istream* in = &std::cin;
  if (a.input != "-") {
    file.open(a.input, std::ios::binary);
    if (!file) {
      std::cerr << "cannot open '" << a.input << "'\n";
      return kExitData;
    }
    in = &file;
  }

  std::size_t ingested = 0;
  std::size_t failed = 0;
  auto insert_one = [&](const std::string& where, const auto& make_record) {
    try {
      const IngestRecord rec = make_record();
      store.insert(rec.resolved_id(), rec.pattern);
      ++ingested;
    } catch (const Error& e) {
      ++failed;
      std::cerr << where << ": " << e.what() << '\n';
    }
  };

  if (a.input_format == "jsonl") {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(*in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      insert_one("line " + std::to_string(line_no), [&] { return parse_record(line, mode, store.dim()); });
    }
  } else if (a.input_format == "f32le") {
    if (mode == MapMode::Native) throw UsageError("f32le input holds vectors; use sign-phase or zero-phase");
    if (a.dim == 0) throw UsageError("--input-format f32le needs --dim");
    if (a.dim != store.dim()) {
      std::cerr << "--dim " << a.dim << " does not match store dimension " << store.dim() << '\n';
      return kExitData;
    }
    const std::string bytes((std::istreambuf_iterator<char>(*in)), std::istreambuf_iterator<char>());
    const std::size_t row_bytes = 4 * static_cast<std::size_t>(a.dim);
    if (bytes.size() % row_bytes != 0) {
      std::cerr << "input size " << bytes.size() << " is not a multiple of " << row_bytes << " bytes\n";
      return kExitData;
    }
    for (std::size_t row = 0; row < bytes.size() / row_bytes; ++row) {
      insert_one("row " + std::to_string(row + 1), [&] {
        std::vector<double> v(a.dim);
        for (std::size_t x = 0; x < a.dim; ++x) {
          std::uint32_t u = 0;
          for (int b = 0; b < 4; ++b) {
            u |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[row * row_bytes + 4 * x + b])) << (8 * b);
          }
          v[x] = static_cast<double>(std::bit_cast<float>(u));
        }
        return IngestRecord{std::nullopt, map_vector(RealVector(std::move(v)), mode)};
      });
    }
  } else {
    throw UsageError("unknown --input-format '" + a.input_format + "'");
  }
  store.flush();
  std::cout << "ingested " << ingested << '\n';
  return failed == 0 ? kExitOk : kExitData;
}

// ---------------------------------------------------------------------------

struct QueryArgs {
  std::string db;
  std::string query_json;
  std::size_t topk = 10;
  std::size_t workers = default_worker_count();
  std::string kernel = "scalar";
  std::string map = "sign-phase";
};

int cmd_query(const QueryArgs& a) {
  if (a.topk == 0) throw UsageError("--topk must be at least 1");
  if (a.workers == 0) throw UsageError("--workers must be at least 1");
  const KernelKind kind = parse_kernel_kind(a.kernel);
  const Store store{fs::path(a.db)};
  // Queries are compared at storage precision, like the records they scan.
  const WavePattern query = quantize(parse_record(a.query_json, parse_map_mode(a.map), store.dim()).pattern);
  QueryConfig cfg;
  cfg.k = a.topk;
  cfg.workers = a.workers;
  cfg.kernel = kind;
  for (const Hit& h : top_k(store, query, cfg)) std::cout << hit_to_json(h) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string db;
  std::string synthetic;
  std::uint32_t dim = 0;
  std::string topk = "1,10,100";
  std::size_t reps = 20;
  std::size_t workers = default_worker_count();
  std::uint64_t seed = 42;
  std::string out = ".";
  std::size_t queries = 10;
  std::string kernel = "scalar";
  bool cold = false;
  bool keep_store = false;
};

int cmd_bench(const BenchArgs& a) {
  if (a.db.empty() == a.synthetic.empty()) throw UsageError("give exactly one of --db or --synthetic");
  if (a.reps == 0 || a.queries == 0 || a.workers == 0) {
    throw UsageError("--reps, --queries and --workers must be at least 1");
  }
  const auto ks = parse_size_list(a.topk, "--topk");
  const KernelKind kind = parse_kernel_kind(a.kernel);
  if (a.reps < 20) std::cerr << "note: fewer than 20 repetitions; numbers are indicative only\n";
  fs::create_directories(a.out);

  std::vector<LatencyReport> rows;
  auto run_all_k = [&](const Store& store) {
    const auto queries = gen_synthetic(a.queries, store.dim(), a.seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t k : ks) {
      QueryConfig cfg;
      cfg.k = k;
      cfg.workers = a.workers;
      cfg.kernel = kind;
      rows.push_back(measure_latency(store, queries, cfg, a.reps, a.cold));
      const auto& r = rows.back();
      std::cerr << "n=" << r.n << " L=" << r.dim << " k=" << r.k << " avg_ms=" << format_number(r.avg_ms)
                << " p95_ms=" << format_number(r.p95_ms) << '\n';
    }
  };

  if (!a.db.empty()) {
    const Store store{fs::path(a.db)};
    if (a.dim != 0 && a.dim != store.dim()) {
      std::cerr << "--dim " << a.dim << " does not match store dimension " << store.dim() << '\n';
      return kExitData;
    }
    run_all_k(store);
  } else {
    if (a.dim == 0) throw UsageError("--synthetic needs --dim");
    auto sizes = parse_size_list(a.synthetic, "--synthetic");
    std::sort(sizes.begin(), sizes.end());
    const fs::path store_dir = fs::path(a.out) / "synthetic-store";
    fs::remove_all(store_dir);
    {
      Store store(store_dir, a.dim);
      SyntheticGenerator gen(a.dim, a.seed);
      std::size_t have = 0;
      for (std::size_t n : sizes) {
        for (; have < n; ++have) store.insert(PatternId::from_counter(have), gen.next());
        store.flush();
        run_all_k(store);
      }
    }
    if (!a.keep_store) fs::remove_all(store_dir);

    if (sizes.size() >= 2) {
      for (std::size_t k : ks) {
        std::vector<double> xs;
        std::vector<double> ys;
        for (const auto& r : rows) {
          if (r.k != k) continue;
          xs.push_back(static_cast<double>(r.n));
          ys.push_back(r.avg_ms);
        }
        const LinearFit fit = fit_line(xs, ys);
        std::cerr << "k=" << k << " linear fit: slope_ms_per_pattern=" << format_number(fit.slope)
                  << " r2=" << format_number(fit.r_squared) << '\n';
      }
    }
  }

  std::ostringstream csv;
  write_latency_csv(csv, rows);
  if (!write_file(fs::path(a.out) / "latency.csv", csv.str())) {
    std::cerr << "cannot write latency.csv\n";
    return kExitData;
  }
  std::cout << csv.str();
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct OpsEvalArgs {
  std::size_t bases = 50;
  std::size_t dim = 512;
  std::uint64_t seed = 42;
  std::string ops = "neg,shift,int_up,int_down";
  double jitter = 0.01;
  std::string out = ".";
};

int cmd_ops_eval(const OpsEvalArgs& a) {
  std::vector<OperatorSpec> ops;
  for (const auto& item : split_list(a.ops)) {
    try {
      ops.push_back(parse_operator(item));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (ops.empty()) throw UsageError("--ops is empty");
  if (a.bases < 2) throw UsageError("--bases must be at least 2");
  if (a.dim == 0) throw UsageError("--dim must be at least 1");

  OperatorEvalConfig cfg;
  cfg.bases = a.bases;
  cfg.dim = a.dim;
  cfg.seed = a.seed;
  cfg.ops = ops;
  cfg.jitter = a.jitter;
  const OperatorEvalReport report = operator_eval(cfg);

  fs::create_directories(a.out);
  std::ostringstream summary;
  std::ostringstream hist;
  std::ostringstream hres;
  std::ostringstream hcos;
  write_operator_summary_csv(summary, report);
  write_operator_hist_csv(hist, report);
  write_heatmap_csv(hres, report.item_ids, report.heatmap_res);
  write_heatmap_csv(hcos, report.item_ids, report.heatmap_cos);
  const fs::path out(a.out);
  if (!write_file(out / "operator_summary.csv", summary.str()) ||
      !write_file(out / "operator_hist.csv", hist.str()) || !write_file(out / "heatmap_res.csv", hres.str()) ||
      !write_file(out / "heatmap_cos.csv", hcos.str())) {
    std::cerr << "cannot write report files to '" << a.out << "'\n";
    return kExitData;
  }
  std::cerr << "note: p1_cos and d_cos use cosine on amplitude projections (phase-blind baseline)\n";
  std::cout << summary.str();
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::uint64_t seed = 42;
  std::size_t cases = 10000;
  bool inject_fault = false;
};

int cmd_verify(const VerifyArgs& a) {
  if (a.cases == 0) throw UsageError("--cases must be at least 1");
  VerifyConfig cfg;
  cfg.seed = a.seed;
  cfg.cases = a.cases;
  ScoreFn score = scalar_score_fn();
  if (a.inject_fault) {
    // Drops the scale-alignment factor: breaks the energy-imbalance property.
    score = [](const WavePattern& p, const WavePattern& q) {
      const ResonanceTerms t = resonance_terms(p, q);
      const double sum = t.energy.e1 + t.energy.e2;
      return sum == 0.0 ? 0.0 : 0.5 * (sum + 2.0 * t.inner_re) / sum;
    };
  }
  const VerifyReport report = run_property_suite(cfg, score);
  for (const auto& r : report.results) {
    std::printf("%s %-26s worst=%.3e tol=%.0e cases=%zu\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.worst,
                r.tolerance, r.cases);
  }
  return report.all_passed() ? kExitOk : kExitData;
}

// ---------------------------------------------------------------------------

int cmd_dump_header(const std::string& db) {
  const auto files = Store::list_segment_files(db);
  if (files.empty()) {
    std::cerr << "no segments in '" << db << "'\n";
    return kExitData;
  }
  for (const auto& [number, path] : files) {
    const SegmentHeader h = read_segment_header(path);
    std::cout << "file: " << path.filename().string() << '\n'
              << "magic: " << std::string(h.magic.data(), h.magic.size()) << '\n'
              << "format_version: " << h.format_version << '\n'
              << "dim: " << h.dim << '\n'
              << "record_capacity: " << h.record_capacity << '\n'
              << "record_size: " << record_size(h.dim) << '\n';
  }
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimMismatch:
    case ErrorCode::DuplicateId:
    case ErrorCode::CorruptHeader:
    case ErrorCode::NotFound:
      return kExitConflict;
    default:
      return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resonancedb: phase-aware pattern store"};
  app.require_subcommand(1);

  InitArgs init;
  auto* init_cmd = app.add_subcommand("init", "Create an empty store");
  init_cmd->add_option("--db", init.db, "Store directory")->required();
  init_cmd->add_option("--dim", init.dim, "Pattern dimension L")->required();
  init_cmd->add_option("--segment-records", init.segment_records, "Records per segment file");

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Insert patterns from JSON Lines or raw float32 rows");
  ingest_cmd->add_option("--db", ingest.db, "Store directory")->required();
  ingest_cmd->add_option("--input", ingest.input, "Input file, or - for stdin")->required();
  ingest_cmd->add_option("--map", ingest.map, "sign-phase | zero-phase | native");
  ingest_cmd->add_option("--input-format", ingest.input_format, "jsonl | f32le");
  ingest_cmd->add_option("--dim", ingest.dim, "Row width for f32le input");

  QueryArgs query;
  auto* query_cmd = app.add_subcommand("query", "Exact top-k search");
  query_cmd->add_option("--db", query.db, "Store directory")->required();
  query_cmd->add_option("--query-json", query.query_json, "Query record as one JSON object")->required();
  query_cmd->add_option("--topk", query.topk, "Number of hits");
  query_cmd->add_option("--workers", query.workers, "Scan threads (default: RESONANCEDB_WORKERS or CPU count)");
  query_cmd->add_option("--kernel", query.kernel, "scalar | vectorized");
  query_cmd->add_option("--map", query.map, "Mapping for vector queries");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Measure top-k latency");
  bench_cmd->add_option("--db", bench.db, "Existing store to benchmark");
  bench_cmd->add_option("--synthetic", bench.synthetic, "Synthetic corpus size(s), e.g. 10000,50000,100000");
  bench_cmd->add_option("--dim", bench.dim, "Pattern dimension");
  bench_cmd->add_option("--topk", bench.topk, "Comma-separated k values");
  bench_cmd->add_option("--reps", bench.reps, "Repetitions per query");
  bench_cmd->add_option("--workers", bench.workers, "Scan threads");
  bench_cmd->add_option("--seed", bench.seed, "Generator seed");
  bench_cmd->add_option("--out", bench.out, "Output directory for latency.csv");
  bench_cmd->add_option("--queries", bench.queries, "Distinct synthetic queries");
  bench_cmd->add_option("--kernel", bench.kernel, "scalar | vectorized");
  bench_cmd->add_flag("--cold", bench.cold, "Drop page cache and reopen the store before every query");
  bench_cmd->add_flag("--keep-store", bench.keep_store, "Keep the synthetic store under --out");

  OpsEvalArgs ops;
  auto* ops_cmd = app.add_subcommand("ops-eval", "Operator retrieval and distance experiment");
  ops_cmd->add_option("--bases", ops.bases, "Number of synthetic base patterns");
  ops_cmd->add_option("--dim", ops.dim, "Pattern dimension");
  ops_cmd->add_option("--seed", ops.seed, "Generator seed");
  ops_cmd->add_option("--ops", ops.ops, "Operators, e.g. neg,shift:0.7854,int_up:2.0,int_down:0.6");
  ops_cmd->add_option("--jitter", ops.jitter, "Amplitude noise on query-side bases");
  ops_cmd->add_option("--out", ops.out, "Output directory for CSV reports");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run the resonance property suite");
  verify_cmd->add_option("--seed", verify.seed, "Generator seed");
  verify_cmd->add_option("--cases", verify.cases, "Random pattern pairs");
  verify_cmd->add_flag("--inject-fault", verify.inject_fault, "Self-test: score with a deliberately broken kernel")
      ->group("");

  std::string dump_db;
  auto* dump_cmd = app.add_subcommand("dump-header", "Print segment header fields");
  dump_cmd->add_option("--db", dump_db, "Store directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*init_cmd) return cmd_init(init);
    if (*ingest_cmd) return cmd_ingest(ingest);
    if (*query_cmd) return cmd_query(query);
    if (*bench_cmd) return cmd_bench(bench);
    if (*ops_cmd) return cmd_ops_eval(ops);
    if (*verify_cmd) return cmd_verify(verify);
    if (*dump_cmd) return cmd_dump_header(dump_db);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::InvalidArgument && *query_cmd) return kExitData;
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
