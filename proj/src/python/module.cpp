#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ptl/counter.hpp"
#include "ptl/error.hpp"
#include "ptl/models.hpp"
#include "ptl/patterns.hpp"
#include "ptl/predictor.hpp"
#include "ptl/sieve.hpp"
#include "ptl/stats.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

ptl::TuplePattern to_pattern(const py::object& obj) {
  if (py::isinstance<ptl::TuplePattern>(obj)) return obj.cast<ptl::TuplePattern>();
  if (py::isinstance<py::str>(obj)) return ptl::TuplePattern::parse(obj.cast<std::string>());
  return ptl::TuplePattern(obj.cast<std::vector<std::uint64_t>>());
}

ptl::SieveOptions sieve_options(unsigned threads) {
  ptl::SieveOptions o;
  o.threads = threads;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Prime gaps and prime k-tuples: sieving, Hardy-Littlewood predictions, random models.";

  auto base = py::register_exception<ptl::Error>(m, "PtlError", PyExc_RuntimeError);
  py::register_exception<ptl::ValidationError>(m, "ValidationError", base.ptr());

  // --- sieve
  py::class_<ptl::PrimeBitmap>(m, "PrimeBitmap")
      .def_property_readonly("lo", &ptl::PrimeBitmap::lo)
      .def_property_readonly("hi", &ptl::PrimeBitmap::hi)
      .def("is_prime", &ptl::PrimeBitmap::is_prime, "n"_a)
      .def("count", &ptl::PrimeBitmap::count)
      .def("primes", &ptl::PrimeBitmap::primes)
      .def("__len__", &ptl::PrimeBitmap::count);

  py::class_<ptl::GapRecord>(m, "GapRecord")
      .def_readonly("lower", &ptl::GapRecord::lower)
      .def_readonly("upper", &ptl::GapRecord::upper)
      .def_readonly("gap", &ptl::GapRecord::gap)
      .def("__iter__", [](const ptl::GapRecord& r) {
        return py::iter(py::make_tuple(r.lower, r.upper, r.gap));
      })
      .def("__repr__", [](const ptl::GapRecord& r) {
        return "GapRecord(" + std::to_string(r.lower) + ", " + std::to_string(r.upper) + ", " +
               std::to_string(r.gap) + ")";
      });

  m.def("sieve_range", [](std::uint64_t lo, std::uint64_t hi, unsigned threads) {
        return ptl::sieve_range(lo, hi, sieve_options(threads));
      }, "lo"_a, "hi"_a, "threads"_a = 1);
  m.def("prime_count", [](std::uint64_t n, unsigned threads) {
        return ptl::prime_count(n, sieve_options(threads));
      }, "n"_a, "threads"_a = 1);
  m.def("max_prime_gap", [](std::uint64_t x) { return ptl::max_prime_gap(x); }, "x"_a);
  m.def("gap_records_up_to", [](std::uint64_t x) { return ptl::gap_records_up_to(x); }, "x"_a);
  m.def("save_bitmap", &ptl::save_bitmap, "path"_a, "bitmap"_a);
  m.def("load_bitmap", &ptl::load_bitmap, "path"_a);

  // --- patterns
  py::class_<ptl::TuplePattern>(m, "TuplePattern")
      .def(py::init<std::vector<std::uint64_t>>(), "offsets"_a)
      .def_static("parse", [](const std::string& s) { return ptl::TuplePattern::parse(s); })
      .def_property_readonly("offsets", [](const ptl::TuplePattern& p) {
        return std::vector<std::uint64_t>(p.offsets().begin(), p.offsets().end());
      })
      .def("__len__", &ptl::TuplePattern::size)
      .def("__str__", &ptl::TuplePattern::to_string)
      .def("__repr__", [](const ptl::TuplePattern& p) { return "TuplePattern(" + p.to_string() + ")"; });

  py::class_<ptl::SingularSeriesValue>(m, "SingularSeriesValue")
      .def_readonly("constant", &ptl::SingularSeriesValue::constant)
      .def_readonly("truncation_prime", &ptl::SingularSeriesValue::truncation_prime)
      .def_readonly("tail_bound", &ptl::SingularSeriesValue::tail_bound)
      .def_readonly("admissible", &ptl::SingularSeriesValue::admissible);

  m.def("omega", [](const py::object& p, std::uint64_t q) { return ptl::omega(to_pattern(p), q); },
        "pattern"_a, "p"_a);
  m.def("is_admissible", [](const py::object& p) { return ptl::is_admissible(to_pattern(p)); },
        "pattern"_a);
  m.def("singular_series", [](const py::object& p, std::uint64_t t) {
        return ptl::singular_series(to_pattern(p), t);
      }, "pattern"_a, "truncation_prime"_a = ptl::kDefaultTruncationPrime);
  m.def("primorial_ratio", &ptl::primorial_ratio, "a"_a);

  // --- predictor
  py::class_<ptl::Constants>(m, "Constants")
      .def_readonly("euler_gamma", &ptl::Constants::euler_gamma)
      .def_readonly("xi", &ptl::Constants::xi)
      .def_readonly("half_e_gamma", &ptl::Constants::half_e_gamma);
  m.def("constants", &ptl::constants, py::return_value_policy::reference);

  py::class_<ptl::Prediction>(m, "Prediction")
      .def_readonly("n", &ptl::Prediction::n)
      .def_readonly("pattern", &ptl::Prediction::pattern)
      .def_readonly("mean", &ptl::Prediction::mean)
      .def_readonly("variance", &ptl::Prediction::variance)
      .def_readonly("sigma", &ptl::Prediction::sigma)
      .def_readonly("constant_used", &ptl::Prediction::constant_used)
      .def("mean_rounded", &ptl::Prediction::mean_rounded)
      .def("sigma_rounded", &ptl::Prediction::sigma_rounded);

  m.def("integrate_log_power", py::overload_cast<double, int>(&ptl::integrate_log_power), "n"_a, "k"_a);
  m.def("predicted_count", [](const py::object& p, double n, std::uint64_t t) {
        return ptl::predicted_count(to_pattern(p), n, t);
      }, "pattern"_a, "n"_a, "truncation_prime"_a = ptl::kDefaultTruncationPrime);
  m.def("predicted_sigma", [](const py::object& p, double n, std::uint64_t t) {
        return ptl::predicted_sigma(to_pattern(p), n, t);
      }, "pattern"_a, "n"_a, "truncation_prime"_a = ptl::kDefaultTruncationPrime);
  m.def("z_score", &ptl::z_score, "actual"_a, "prediction"_a);
  m.def("mertens_product", &ptl::mertens_product, "y"_a);
  m.def("dependence_coefficient", &ptl::dependence_coefficient, "x"_a);
  m.def("gap_bound_cramer", &ptl::gap_bound_cramer, "x"_a);
  m.def("gap_bound_xi", &ptl::gap_bound_xi, "x"_a);

  // --- counter
  m.def("count_tuples", [](const py::object& p, std::uint64_t n, unsigned threads) {
        return ptl::count_tuples(to_pattern(p), n, sieve_options(threads));
      }, "pattern"_a, "n"_a, "threads"_a = 1);
  m.def("count_in_blocks", [](const py::object& p, std::uint64_t n, std::uint64_t block) {
        py::list out;
        for (const auto& b : ptl::count_in_blocks(to_pattern(p), n, block).blocks) {
          out.append(py::make_tuple(b.start, b.end, b.count));
        }
        return out;
      }, "pattern"_a, "n"_a, "block_size"_a);

  py::class_<ptl::BoundComparison>(m, "BoundComparison")
      .def_readonly("x", &ptl::BoundComparison::x)
      .def_readonly("record", &ptl::BoundComparison::record)
      .def_readonly("max_gap", &ptl::BoundComparison::max_gap)
      .def_readonly("ratio_cramer", &ptl::BoundComparison::ratio_cramer)
      .def_readonly("ratio_xi", &ptl::BoundComparison::ratio_xi);
  m.def("bound_comparison_table", [](const std::vector<std::uint64_t>& xs) {
        return ptl::bound_comparison_table(xs);
      }, "xs"_a);

  // --- models
  py::enum_<ptl::ModelKind>(m, "ModelKind")
      .value("cramer", ptl::ModelKind::cramer)
      .value("granville", ptl::ModelKind::granville)
      .value("random_sieve", ptl::ModelKind::random_sieve);

  py::class_<ptl::ModelConfig>(m, "ModelConfig")
      .def(py::init([](ptl::ModelKind kind, std::uint64_t a, std::uint64_t b, std::uint64_t seed,
                       std::optional<std::uint64_t> granville_a, std::optional<std::uint64_t> sieve_z) {
             ptl::ModelConfig c{kind, a, b, seed, granville_a, sieve_z};
             c.validate();
             return c;
           }),
           "kind"_a, "a"_a, "b"_a, "seed"_a = 0, "granville_a"_a = py::none(), "sieve_z"_a = py::none())
      .def_readonly("kind", &ptl::ModelConfig::kind)
      .def_readonly("a", &ptl::ModelConfig::a)
      .def_readonly("b", &ptl::ModelConfig::b)
      .def_readonly("seed", &ptl::ModelConfig::seed);

  py::class_<ptl::TrialOutcome>(m, "TrialOutcome")
      .def_readonly("trial_index", &ptl::TrialOutcome::trial_index)
      .def_readonly("seed", &ptl::TrialOutcome::seed)
      .def_readonly("element_count", &ptl::TrialOutcome::element_count)
      .def_readonly("max_gap", &ptl::TrialOutcome::max_gap)
      .def_readonly("ratio_cramer", &ptl::TrialOutcome::ratio_cramer)
      .def_readonly("ratio_xi", &ptl::TrialOutcome::ratio_xi)
      .def("__eq__", [](const ptl::TrialOutcome& a, const ptl::TrialOutcome& b) { return a == b; });

  py::class_<ptl::Summary>(m, "Summary")
      .def_readonly("count", &ptl::Summary::count)
      .def_readonly("mean", &ptl::Summary::mean)
      .def_readonly("variance", &ptl::Summary::variance)
      .def_readonly("min", &ptl::Summary::min)
      .def_readonly("max", &ptl::Summary::max)
      .def_readonly("q05", &ptl::Summary::q05)
      .def_readonly("q25", &ptl::Summary::q25)
      .def_readonly("q50", &ptl::Summary::q50)
      .def_readonly("q75", &ptl::Summary::q75)
      .def_readonly("q95", &ptl::Summary::q95);

  py::class_<ptl::TrialSummary>(m, "TrialSummary")
      .def_readonly("max_gap", &ptl::TrialSummary::max_gap)
      .def_readonly("ratio_cramer", &ptl::TrialSummary::ratio_cramer)
      .def_readonly("ratio_xi", &ptl::TrialSummary::ratio_xi)
      .def_readonly("element_count", &ptl::TrialSummary::element_count);

  py::class_<ptl::TrialRun>(m, "TrialRun")
      .def_readonly("generator", &ptl::TrialRun::generator)
      .def_readonly("outcomes", &ptl::TrialRun::outcomes)
      .def_readonly("summary", &ptl::TrialRun::summary);

  m.def("simulate", &ptl::simulate, "config"_a);
  m.def("run_trials", &ptl::run_trials, "config"_a, "trials"_a, "threads"_a = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("sample_model", [](const ptl::ModelConfig& c) { return ptl::sample_model(c).elements; },
        "config"_a);

  // --- stats
  py::class_<ptl::NormalityReport>(m, "NormalityReport")
      .def_readonly("zscores", &ptl::NormalityReport::zscores)
      .def_readonly("ks_statistic", &ptl::NormalityReport::ks_statistic)
      .def_readonly("critical_value", &ptl::NormalityReport::critical_value)
      .def_readonly("alpha", &ptl::NormalityReport::alpha)
      .def_readonly("passed", &ptl::NormalityReport::pass)
      .def_readonly("block_size", &ptl::NormalityReport::block_size);

  m.def("summarize", [](const std::vector<double>& v) { return ptl::summarize(v); }, "samples"_a);
  m.def("ks_test_standard_normal", [](const std::vector<double>& z, double alpha) {
        return ptl::ks_test_standard_normal(z, alpha);
      }, "zscores"_a, "alpha"_a = 0.05);
  m.def("block_z_scores", [](const py::object& p, std::uint64_t n, std::uint64_t block) {
        return ptl::block_z_scores(to_pattern(p), n, block);
      }, "pattern"_a, "n"_a, "block_size"_a);
}
