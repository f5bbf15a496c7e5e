#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/format.hpp"
#include "ptl/cli.hpp"
#include "ptl/counter.hpp"
#include "ptl/error.hpp"
#include "ptl/models.hpp"
#include "ptl/patterns.hpp"
#include "ptl/predictor.hpp"
#include "ptl/sieve.hpp"
#include "ptl/stats.hpp"

namespace ptl::cli {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string format;  // empty: the command's default
  int precision = 6;
  unsigned threads = 1;
};

struct CommandResult {
  std::vector<Record> rows;
  // Single-object commands put their fields here; rows then hold one row
  // with the same fields for CSV output.
  std::optional<Record> object;
  std::string rows_key = "rows";
  Json extra = Json::object();
  std::string default_format = "csv";
  std::string generator_tag;
};

using Params = std::vector<std::pair<std::string, std::string>>;

// --- argument helpers ------------------------------------------------------

std::uint64_t require_integer(const std::string& flag, const std::string& text) {
  const auto v = parse_integer(text);
  if (!v) throw ValidationError("--" + flag + ": expected a non-negative integer, got \"" + text + "\"");
  return *v;
}

std::vector<std::uint64_t> parse_integer_list(const std::string& flag, const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(require_integer(flag, item));
  if (out.empty()) throw ValidationError("--" + flag + ": empty list");
  return out;
}

TuplePattern require_pattern(const std::string& text) {
  try {
    return TuplePattern::parse(text);
  } catch (const DomainError& e) {
    throw ValidationError(std::string("--pattern: ") + e.what());
  }
}

// 10, 100, ... <= n, followed by n itself when n is not a power of ten.
std::vector<std::uint64_t> decade_points(std::uint64_t n, std::uint64_t first) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = first; x <= n; x *= 10) {
    out.push_back(x);
    if (x > n / 10) break;
  }
  if (out.empty() || out.back() != n) out.push_back(n);
  return out;
}

SieveOptions sieve_options(const GlobalOptions& g) {
  SieveOptions o;
  o.threads = g.threads;
  return o;
}

// --- commands --------------------------------------------------------------

std::uint64_t primes_at_most(const PrimeBitmap& bitmap, std::uint64_t x) {
  if (x < 2) return 0;
  std::uint64_t total = bitmap.contains_two() ? 1 : 0;
  if (x < 3) return total;
  const std::uint64_t bits = std::min(bitmap.odd_count(), (x - 3) / 2 + 1);
  const auto words = bitmap.words();
  for (std::uint64_t w = 0; w < bits / 64; ++w) total += __builtin_popcountll(words[w]);
  if (bits % 64 != 0) {
    total += __builtin_popcountll(words[bits / 64] & ((std::uint64_t{1} << (bits % 64)) - 1));
  }
  return total;
}

CommandResult cmd_primes(const GlobalOptions& g, std::uint64_t n, const std::string& cache_dir,
                         std::ostream& err) {
  if (n < 1) throw ValidationError("--max must be >= 1");
  CommandResult r;
  const std::vector<std::uint64_t> points = decade_points(n, 10);
  if (n < 2) {
    r.rows.push_back(Record{}.add("x", n).add("pi", std::uint64_t{0}));
    return r;
  }
  std::optional<PrimeBitmap> bitmap;
  std::string path;
  if (!cache_dir.empty()) {
    fs::create_directories(cache_dir);
    path = (fs::path(cache_dir) / ("primes_2_" + std::to_string(n + 1) + ".pbm")).string();
    if (fs::exists(path)) {
      try {
        PrimeBitmap loaded = load_bitmap(path);
        if (loaded.lo() == 2 && loaded.hi() == n + 1) {
          bitmap.emplace(std::move(loaded));
          err << "ptl: loaded sieve cache " << path << '\n';
        }
      } catch (const IoError& e) {
        err << "ptl: ignoring unreadable cache " << path << ": " << e.what() << '\n';
      }
    }
  }
  if (!bitmap) {
    bitmap.emplace(sieve_range(2, n + 1, sieve_options(g)));
    if (!path.empty()) {
      save_bitmap(path, *bitmap);
      err << "ptl: wrote sieve cache " << path << '\n';
    }
  }
  for (const std::uint64_t x : points) {
    r.rows.push_back(Record{}.add("x", x).add("pi", primes_at_most(*bitmap, x)));
  }
  return r;
}

Record gap_row(std::uint64_t x, const GapRecord& rec) {
  const double xd = static_cast<double>(x);
  const double gap = static_cast<double>(rec.gap);
  return Record{}
      .add("x", x)
      .add("lower", rec.lower)
      .add("upper", rec.upper)
      .add("gap", rec.gap)
      .add("ratio_cramer", gap / gap_bound_cramer(xd))
      .add("ratio_xi", gap / gap_bound_xi(xd));
}

CommandResult cmd_gaps(const GlobalOptions& g, std::uint64_t n, bool records) {
  if (n < 3) throw ValidationError("--max must be >= 3 (two primes needed)");
  CommandResult r;
  if (records) {
    for (const GapRecord& rec : gap_records_up_to(n, sieve_options(g))) {
      r.rows.push_back(gap_row(rec.upper, rec));
    }
  } else {
    std::vector<std::uint64_t> points = decade_points(n, 10);
    for (const BoundComparison& row : bound_comparison_table(points, sieve_options(g))) {
      r.rows.push_back(gap_row(row.x, row.record));
    }
  }
  return r;
}

CommandResult cmd_count(const GlobalOptions& g, const TuplePattern& pattern, std::uint64_t n,
                        std::optional<std::uint64_t> block) {
  if (n < 2) throw ValidationError("--max must be >= 2");
  CommandResult r;
  if (block) {
    if (*block < kMinBlockSize || n / 2 < *block) {
      throw ValidationError("--blocks must be >= 1000 and at most max/2");
    }
    for (const Block& b : count_in_blocks(pattern, n, *block, sieve_options(g)).blocks) {
      r.rows.push_back(Record{}.add("start", b.start).add("end", b.end).add("count", b.count));
    }
  } else {
    r.rows.push_back(
        Record{}.add("n", n).add("count", count_tuples(pattern, n, sieve_options(g))));
  }
  return r;
}

Record constant_record(const TuplePattern& pattern, const SingularSeriesValue& c) {
  return Record{}
      .add("pattern", pattern.to_string())
      .add("k", static_cast<std::uint64_t>(pattern.size()))
      .add("admissible", c.admissible)
      .add("constant", c.constant)
      .add("truncation_prime", c.truncation_prime)
      .add("tail_bound", c.tail_bound);
}

CommandResult object_result(Record rec) {
  CommandResult r;
  r.rows.push_back(rec);
  r.object = std::move(rec);
  r.default_format = "json";
  return r;
}

CommandResult cmd_predict(const TuplePattern& pattern, std::uint64_t n, std::uint64_t truncation) {
  if (n < 3) throw ValidationError("--max must exceed 2");
  if (truncation < 2) throw ValidationError("--truncation must be >= 2");
  const Prediction p = predicted_sigma(pattern, static_cast<double>(n), truncation);
  Record rec = constant_record(pattern, p.constant_used);
  rec.add("n", n)
      .add("mean", p.mean)
      .add("mean_rounded", static_cast<std::int64_t>(p.mean_rounded()))
      .add("variance", p.variance)
      .add("sigma", p.sigma)
      .add("sigma_rounded", static_cast<std::int64_t>(p.sigma_rounded()));
  return object_result(std::move(rec));
}

CommandResult cmd_constant(const TuplePattern& pattern, std::uint64_t truncation) {
  if (truncation < 2) throw ValidationError("--truncation must be >= 2");
  return object_result(constant_record(pattern, singular_series(pattern, truncation)));
}

Record summary_record(const Summary& s) {
  return Record{}
      .add("count", static_cast<std::uint64_t>(s.count))
      .add("mean", s.mean)
      .add("variance", s.variance)
      .add("min", s.min)
      .add("max", s.max)
      .add("q05", s.q05)
      .add("q25", s.q25)
      .add("q50", s.q50)
      .add("q75", s.q75)
      .add("q95", s.q95);
}

Json summary_json(const TrialRun& run, int precision) {
  Json j = Json::object();
  j["max_gap"] = record_to_json(summary_record(run.summary.max_gap), precision);
  j["ratio_cramer"] = record_to_json(summary_record(run.summary.ratio_cramer), precision);
  j["ratio_xi"] = record_to_json(summary_record(run.summary.ratio_xi), precision);
  j["element_count"] = record_to_json(summary_record(run.summary.element_count), precision);
  return j;
}

struct SimulateArgs {
  std::string model;
  std::string range;
  std::string trials = "1";
  std::string seed = "0";
  std::string granville_a;
  std::string sieve_z;
  std::string summary_out;
};

CommandResult cmd_simulate(const GlobalOptions& g, const SimulateArgs& args, std::uint64_t& seed_out) {
  ModelConfig config;
  try {
    config.kind = parse_model_kind(args.model);
  } catch (const ModelParameterError& e) {
    throw ValidationError(std::string("--model: ") + e.what());
  }
  const auto colon = args.range.find(':');
  if (colon == std::string::npos) throw ValidationError("--range must look like a:b");
  config.a = require_integer("range", args.range.substr(0, colon));
  config.b = require_integer("range", args.range.substr(colon + 1));
  const std::uint64_t trials = require_integer("trials", args.trials);
  if (trials < 1) throw ValidationError("--trials must be >= 1");
  config.seed = require_integer("seed", args.seed);
  if (!args.granville_a.empty()) config.granville_a = require_integer("granville-a", args.granville_a);
  if (!args.sieve_z.empty()) config.sieve_z = require_integer("sieve-z", args.sieve_z);
  config.validate();

  const TrialRun run = run_trials(config, trials, g.threads);
  CommandResult r;
  r.rows_key = "trials";
  for (const TrialOutcome& o : run.outcomes) {
    r.rows.push_back(Record{}
                         .add("trial", o.trial_index)
                         .add("seed", o.seed)
                         .add("element_count", o.element_count)
                         .add("max_gap", o.max_gap)
                         .add("ratio_cramer", o.ratio_cramer)
                         .add("ratio_xi", o.ratio_xi));
  }
  r.extra["summary"] = summary_json(run, g.precision);
  r.generator_tag = run.generator;
  seed_out = config.seed;
  return r;
}

CommandResult cmd_normality(const GlobalOptions& g, const TuplePattern& pattern, std::uint64_t n,
                            std::uint64_t block, const std::string& alpha_text,
                            std::uint64_t truncation) {
  double alpha = 0.0;
  try {
    std::size_t used = 0;
    alpha = std::stod(alpha_text, &used);
    if (used != alpha_text.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ValidationError("--alpha: not a number: " + alpha_text);
  }
  const NormalityReport rep = block_normality(pattern, n, block, alpha, truncation, sieve_options(g));
  Record rec;
  rec.add("pattern", pattern.to_string())
      .add("n", n)
      .add("block_size", rep.block_size)
      .add("blocks", static_cast<std::uint64_t>(rep.zscores.size()))
      .add("ks_statistic", rep.ks_statistic)
      .add("critical_value", rep.critical_value)
      .add("alpha", rep.alpha)
      .add("pass", rep.pass)
      .add("zscores", rep.zscores);
  return object_result(std::move(rec));
}

CommandResult cmd_compare(const GlobalOptions& g, const TuplePattern& pattern, std::uint64_t n,
                          const std::string& points_text, std::uint64_t truncation) {
  if (n < 3) throw ValidationError("--max must exceed 2");
  const std::vector<std::uint64_t> points =
      points_text.empty() ? decade_points(n, 1000) : parse_integer_list("points", points_text);
  CommandResult r;
  const SingularSeriesValue constant = singular_series(pattern, truncation);
  for (const std::uint64_t x : points) {
    if (x < 3 || x > n) throw ValidationError("--points must lie in [3, max]");
    const std::uint64_t actual = count_tuples(pattern, x, sieve_options(g));
    const Prediction p = predict_interval(pattern, constant, 2.0, static_cast<double>(x));
    const std::int64_t predicted = p.mean_rounded();
    const std::int64_t sigma = p.sigma_rounded();
    // Rounded integers, as a table of counts would print them.
    Value z = Missing{};
    if (sigma > 0) {
      z = (static_cast<double>(actual) - static_cast<double>(predicted)) / static_cast<double>(sigma);
    }
    r.rows.push_back(Record{}
                         .add("n", x)
                         .add("actual", actual)
                         .add("predicted", predicted)
                         .add("sigma", sigma)
                         .add("z", z));
  }
  return r;
}

// --- driver ----------------------------------------------------------------

void emit(std::ostream& out, const GlobalOptions& g, const RunManifest& manifest,
          const CommandResult& r) {
  const std::string format = g.format.empty() ? r.default_format : g.format;
  if (format == "csv") {
    out << render_csv(manifest, r.rows, g.precision);
    return;
  }
  Json body = Json::object();
  body["manifest"] = manifest.to_json();
  if (r.object) {
    const Json fields = record_to_json(*r.object, g.precision);
    for (const auto& [k, v] : fields.items()) body[k] = v;
  } else {
    Json rows = Json::array();
    for (const Record& rec : r.rows) rows.push_back(record_to_json(rec, g.precision));
    body[r.rows_key] = rows;
  }
  for (auto& [k, v] : r.extra.items()) body[k] = v;
  out << body.dump(2) << '\n';
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest source " + path);
  std::string first;
  std::getline(in, first);
  const std::string prefix = "# manifest: ";
  if (first.rfind(prefix, 0) == 0) return RunManifest::from_json(Json::parse(first.substr(prefix.size())));
  std::stringstream rest;
  rest << first << '\n' << in.rdbuf();
  const Json j = Json::parse(rest.str(), nullptr, false);
  if (j.is_discarded()) throw ValidationError(path + " holds neither a CSV nor a JSON manifest");
  if (j.contains("manifest")) return RunManifest::from_json(j["manifest"]);
  return RunManifest::from_json(j);
}

std::vector<std::string> replay_arguments(const RunManifest& m) {
  static const std::vector<std::string> kFlags{"records"};
  std::vector<std::string> args{"ptl", m.command};
  for (const auto& [k, v] : m.parameters) {
    if (std::find(kFlags.begin(), kFlags.end(), k) != kFlags.end()) {
      if (v == "true") args.push_back("--" + k);
      continue;
    }
    args.push_back("--" + k);
    args.push_back(v);
  }
  return args;
}

int run_impl(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prime gaps and prime k-tuples: counts, predictions and model simulations", "ptl"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  GlobalOptions g;
  app.add_option("--format", g.format, "Output format (default depends on command)")
      ->check(CLI::IsMember({"csv", "json"}))
      ->envname("PTL_FORMAT");
  app.add_option("--precision", g.precision, "Significant digits for real numbers")
      ->check(CLI::Range(1, 17))
      ->envname("PTL_PRECISION");
  app.add_option("--threads", g.threads, "Worker threads, 0 = all cores (results unchanged)")
      ->envname("PTL_THREADS");

  std::string max_text, pattern_text = "0,2", cache_dir, blocks_text, truncation_text = "1e6",
                        points_text, block_text, alpha_text = "0.05", replay_path;
  bool records = false;
  SimulateArgs sim;

  auto add_max = [&](CLI::App* sub) {
    sub->add_option("--max", max_text, "Upper bound N (accepts 1e7 style)")->required()->envname("PTL_MAX");
  };
  auto add_pattern = [&](CLI::App* sub) {
    sub->add_option("--pattern", pattern_text, "Comma-separated offsets, e.g. 0,2,6")
        ->capture_default_str()
        ->envname("PTL_PATTERN");
  };
  auto add_truncation = [&](CLI::App* sub) {
    sub->add_option("--truncation", truncation_text, "Largest prime in the singular-series product")
        ->capture_default_str()
        ->envname("PTL_TRUNCATION");
  };

  auto* primes = app.add_subcommand("primes", "Prime counts pi(x) at decades up to N");
  add_max(primes);
  primes->add_option("--cache-dir", cache_dir, "Directory for PBM1 sieve cache files")
      ->envname("PTL_CACHE_DIR");

  auto* gaps = app.add_subcommand("gaps", "Maximal prime gaps against log^2 x bounds");
  add_max(gaps);
  gaps->add_flag("--records", records, "List every record gap instead of decade maxima");

  auto* count = app.add_subcommand("count", "Exact prime k-tuple counts");
  add_pattern(count);
  add_max(count);
  count->add_option("--blocks", blocks_text, "Block size for per-block counts")->envname("PTL_BLOCKS");

  auto* predict = app.add_subcommand("predict", "Hardy-Littlewood mean and sigma");
  add_pattern(predict);
  add_max(predict);
  add_truncation(predict);

  auto* constant = app.add_subcommand("constant", "Singular-series constant C_k");
  add_pattern(constant);
  add_truncation(constant);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo runs of a random prime model");
  simulate->add_option("--model", sim.model, "cramer | granville | random-sieve")
      ->required()
      ->envname("PTL_MODEL");
  simulate->add_option("--range", sim.range, "Half-open range a:b")->required()->envname("PTL_RANGE");
  simulate->add_option("--trials", sim.trials, "Number of trials")->capture_default_str()->envname("PTL_TRIALS");
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str()->envname("PTL_SEED");
  simulate->add_option("--granville-a", sim.granville_a, "Granville sieving bound A (about log x)")
      ->envname("PTL_GRANVILLE_A");
  simulate->add_option("--sieve-z", sim.sieve_z, "Random-sieve bound z")->envname("PTL_SIEVE_Z");
  simulate->add_option("--summary-out", sim.summary_out, "Write the summary JSON here (csv mode)");

  auto* normality = app.add_subcommand("normality", "KS test of per-block z-scores");
  add_pattern(normality);
  add_max(normality);
  normality->add_option("--block", block_text, "Block size")->required()->envname("PTL_BLOCK");
  normality->add_option("--alpha", alpha_text, "0.10, 0.05 or 0.01")->capture_default_str()->envname("PTL_ALPHA");
  add_truncation(normality);

  auto* compare = app.add_subcommand("compare", "Actual vs predicted counts with sigma and z");
  add_pattern(compare);
  add_max(compare);
  compare->add_option("--points", points_text, "Comma-separated n values (default: decades)");
  add_truncation(compare);

  auto* replay = app.add_subcommand("replay", "Re-run the command recorded in an output's manifest");
  replay->add_option("source", replay_path, "CSV or JSON output file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  if (replay->parsed()) {
    const std::vector<std::string> args = replay_arguments(read_manifest(replay_path));
    std::vector<const char*> cargs;
    for (const std::string& a : args) cargs.push_back(a.c_str());
    return run_impl(static_cast<int>(cargs.size()), cargs.data(), out, err);
  }

  RunManifest manifest;
  manifest.tool_version = std::string(kToolVersion);
  manifest.timestamp = current_timestamp();
  Params& params = manifest.parameters;
  if (!g.format.empty()) params.emplace_back("format", g.format);
  params.emplace_back("precision", std::to_string(g.precision));

  CommandResult result;
  if (primes->parsed()) {
    manifest.command = "primes";
    params.emplace_back("max", max_text);
    if (!cache_dir.empty()) params.emplace_back("cache-dir", cache_dir);
    result = cmd_primes(g, require_integer("max", max_text), cache_dir, err);
  } else if (gaps->parsed()) {
    manifest.command = "gaps";
    params.emplace_back("max", max_text);
    params.emplace_back("records", records ? "true" : "false");
    result = cmd_gaps(g, require_integer("max", max_text), records);
  } else if (count->parsed()) {
    manifest.command = "count";
    params.emplace_back("pattern", pattern_text);
    params.emplace_back("max", max_text);
    std::optional<std::uint64_t> block;
    if (!blocks_text.empty()) {
      params.emplace_back("blocks", blocks_text);
      block = require_integer("blocks", blocks_text);
    }
    result = cmd_count(g, require_pattern(pattern_text), require_integer("max", max_text), block);
  } else if (predict->parsed()) {
    manifest.command = "predict";
    params.emplace_back("pattern", pattern_text);
    params.emplace_back("max", max_text);
    params.emplace_back("truncation", truncation_text);
    result = cmd_predict(require_pattern(pattern_text), require_integer("max", max_text),
                         require_integer("truncation", truncation_text));
  } else if (constant->parsed()) {
    manifest.command = "constant";
    params.emplace_back("pattern", pattern_text);
    params.emplace_back("truncation", truncation_text);
    result = cmd_constant(require_pattern(pattern_text), require_integer("truncation", truncation_text));
  } else if (simulate->parsed()) {
    manifest.command = "simulate";
    params.emplace_back("model", sim.model);
    params.emplace_back("range", sim.range);
    params.emplace_back("trials", sim.trials);
    params.emplace_back("seed", sim.seed);
    if (!sim.granville_a.empty()) params.emplace_back("granville-a", sim.granville_a);
    if (!sim.sieve_z.empty()) params.emplace_back("sieve-z", sim.sieve_z);
    std::uint64_t seed = 0;
    result = cmd_simulate(g, sim, seed);
    manifest.seed = seed;
    manifest.generator_tag = result.generator_tag;
    if (!sim.summary_out.empty()) {
      std::ofstream summary(sim.summary_out);
      if (!summary) throw IoError("cannot write " + sim.summary_out);
      Json j = Json::object();
      j["manifest"] = manifest.to_json();
      j["summary"] = result.extra["summary"];
      summary << j.dump(2) << '\n';
    }
  } else if (normality->parsed()) {
    manifest.command = "normality";
    params.emplace_back("pattern", pattern_text);
    params.emplace_back("max", max_text);
    params.emplace_back("block", block_text);
    params.emplace_back("alpha", alpha_text);
    params.emplace_back("truncation", truncation_text);
    result = cmd_normality(g, require_pattern(pattern_text), require_integer("max", max_text),
                           require_integer("block", block_text), alpha_text,
                           require_integer("truncation", truncation_text));
  } else if (compare->parsed()) {
    manifest.command = "compare";
    params.emplace_back("pattern", pattern_text);
    params.emplace_back("max", max_text);
    if (!points_text.empty()) params.emplace_back("points", points_text);
    params.emplace_back("truncation", truncation_text);
    result = cmd_compare(g, require_pattern(pattern_text), require_integer("max", max_text),
                         points_text, require_integer("truncation", truncation_text));
  }
  emit(out, g, manifest, result);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return run_impl(argc, argv, out, err);
  } catch (const ValidationError& e) {
    err << "ptl: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "ptl: " << e.what() << '\n';
    return kExitComputation;
  }
}

}  // namespace ptl::cli
