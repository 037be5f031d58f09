// Python bindings for the aperiodic library.  The module mirrors the C++ API
// one-to-one: free functions keep their names, option structs become
// keyword-constructible classes with the same defaults, and the exception
// hierarchy is re-created so callers can distinguish bad input from a
// computation that honestly failed.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aperiodic/diffraction.hpp"
#include "aperiodic/eigenvalues.hpp"
#include "aperiodic/errors.hpp"
#include "aperiodic/gaplabel.hpp"
#include "aperiodic/pointset.hpp"
#include "aperiodic/presets.hpp"
#include "aperiodic/spectra.hpp"
#include "aperiodic/substitution.hpp"
#include "aperiodic/word.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

// The ConvergenceError payload (the last two estimates) must survive the
// translation, so the python exception instance gets them as attributes.
// NOLINTNEXTLINE(cppcoreguidelines-avoid-non-const-global-variables)
PyObject* convergence_error_type = nullptr;

void register_errors(py::module_& m) {
    const auto base = py::register_exception<aperiodic::Error>(m, "Error", PyExc_RuntimeError);
    const auto input = py::register_exception<aperiodic::InputError>(m, "InputError", base.ptr());
    py::register_exception<aperiodic::WindowError>(m, "WindowError", input.ptr());
    py::register_exception<aperiodic::UnsupportedError>(m, "UnsupportedError", input.ptr());
    const auto comp =
        py::register_exception<aperiodic::ComputationError>(m, "ComputationError", base.ptr());
    py::register_exception<aperiodic::RefinementError>(m, "RefinementError", comp.ptr());

    static py::exception<aperiodic::ConvergenceError> conv(m, "ConvergenceError", comp.ptr());
    convergence_error_type = conv.ptr();
    // Registered last so it is tried before the ComputationError translator.
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const aperiodic::ConvergenceError& e) {
            py::object type = py::reinterpret_borrow<py::object>(convergence_error_type);
            py::object inst = type(e.what());
            inst.attr("previous_estimate") = py::float_(e.previous_estimate);
            inst.attr("last_estimate") = py::float_(e.last_estimate);
            PyErr_SetObject(convergence_error_type, inst.ptr());
        }
    });
}

void register_substitution(py::module_& m) {
    py::class_<aperiodic::Substitution>(m, "Substitution",
                                        "Substitution rule with per-letter tile lengths")
        .def_readonly("alphabet", &aperiodic::Substitution::alphabet)
        .def_readonly("rules", &aperiodic::Substitution::rules)
        .def_readonly("lengths", &aperiodic::Substitution::lengths)
        .def_readonly("seed", &aperiodic::Substitution::seed)
        .def_readonly("mirror", &aperiodic::Substitution::mirror)
        .def("letter_count", &aperiodic::Substitution::letter_count)
        .def("letter", &aperiodic::Substitution::letter, "name"_a,
             "Letter id for a name; raises InputError for unknown names")
        .def("__repr__", [](const aperiodic::Substitution& s) {
            std::ostringstream out;
            out << "Substitution(alphabet=[";
            for (std::size_t i = 0; i < s.alphabet.size(); ++i)
                out << (i ? ", " : "") << '\'' << s.alphabet[i] << '\'';
            out << "], seed='" << s.alphabet[s.seed] << "', mirror=" << (s.mirror ? "True" : "False")
                << ")";
            return out.str();
        });

    py::class_<aperiodic::Word>(m, "Word", "Finite word of letter ids with an absolute first index")
        .def_readonly("letters", &aperiodic::Word::letters)
        .def_readonly("first_index", &aperiodic::Word::first_index)
        .def("__len__", [](const aperiodic::Word& w) { return w.letters.size(); })
        .def(
            "names",
            [](const aperiodic::Word& w, const aperiodic::Substitution& sub) {
                std::vector<std::string> out;
                out.reserve(w.letters.size());
                for (const auto id : w.letters) out.push_back(sub.alphabet.at(id));
                return out;
            },
            "sub"_a, "Letter names of this word under a substitution's alphabet");

    m.def("substitution_from_json", &aperiodic::substitution_from_json, "json_text"_a);
    m.def("substitution_to_json", &aperiodic::substitution_to_json, "sub"_a);
    m.def("iterate", &aperiodic::iterate, "sub"_a, "n"_a,
          "n-fold image of the seed letter (one-sided word)");
    m.def("iterate_letter", &aperiodic::iterate_letter, "sub"_a, "letter"_a, "n"_a);
    m.def("two_sided_word", &aperiodic::two_sided_word, "sub"_a, "n"_a,
          "Mirror completion on indices -L..L-1");
    m.def("common_prefix_ok", &aperiodic::common_prefix_ok, "sub"_a);

    py::class_<aperiodic::SubstitutionMatrix>(m, "SubstitutionMatrix")
        .def_readonly("entries", &aperiodic::SubstitutionMatrix::entries)
        .def("size", &aperiodic::SubstitutionMatrix::size);
    py::class_<aperiodic::PerronFrobeniusData>(m, "PerronFrobeniusData")
        .def_readonly("spectral_radius", &aperiodic::PerronFrobeniusData::lambda)
        .def_readonly("frequencies", &aperiodic::PerronFrobeniusData::frequencies);
    m.def("substitution_matrix", &aperiodic::substitution_matrix, "sub"_a);
    m.def("is_primitive", &aperiodic::is_primitive, "matrix"_a);
    m.def("pf_data", &aperiodic::pf_data, "matrix"_a,
          "Perron-Frobenius eigenvalue and letter-frequency vector");
    m.def("is_pisot", &aperiodic::is_pisot, "matrix"_a);

    py::class_<aperiodic::FrequencyOptions>(m, "FrequencyOptions")
        .def(py::init([](double rel_tol, int max_order, int min_order) {
                 aperiodic::FrequencyOptions o;
                 o.rel_tol = rel_tol;
                 o.max_order = max_order;
                 o.min_order = min_order;
                 return o;
             }),
             "rel_tol"_a = aperiodic::FrequencyOptions{}.rel_tol,
             "max_order"_a = aperiodic::FrequencyOptions{}.max_order,
             "min_order"_a = aperiodic::FrequencyOptions{}.min_order)
        .def_readwrite("rel_tol", &aperiodic::FrequencyOptions::rel_tol)
        .def_readwrite("max_order", &aperiodic::FrequencyOptions::max_order)
        .def_readwrite("min_order", &aperiodic::FrequencyOptions::min_order);
    py::class_<aperiodic::FrequencyEstimate>(m, "FrequencyEstimate")
        .def_readonly("value", &aperiodic::FrequencyEstimate::value)
        .def_readonly("achieved", &aperiodic::FrequencyEstimate::achieved)
        .def_readonly("order", &aperiodic::FrequencyEstimate::order)
        .def("__repr__", [](const aperiodic::FrequencyEstimate& f) {
            std::ostringstream out;
            out << "FrequencyEstimate(value=" << f.value << ", achieved=" << f.achieved
                << ", order=" << f.order << ")";
            return out.str();
        });
    m.def("patch_frequency",
          py::overload_cast<const aperiodic::Substitution&, const std::vector<std::string>&,
                            const aperiodic::FrequencyOptions&>(&aperiodic::patch_frequency),
          "sub"_a, "word"_a, "opts"_a = aperiodic::FrequencyOptions{},
          "Frequency of a patch given by letter names");
    m.def("patch_frequency",
          py::overload_cast<const aperiodic::Substitution&, const std::vector<std::uint8_t>&,
                            const aperiodic::FrequencyOptions&>(&aperiodic::patch_frequency),
          "sub"_a, "word"_a, "opts"_a = aperiodic::FrequencyOptions{});
}

void register_pointset(py::module_& m) {
    py::class_<aperiodic::DecoratedPointSet>(m, "DecoratedPointSet",
                                             "Finite decorated point set on the line")
        .def_readonly("positions", &aperiodic::DecoratedPointSet::positions)
        .def_readonly("decorations", &aperiodic::DecoratedPointSet::decorations)
        .def_readonly("alphabet", &aperiodic::DecoratedPointSet::alphabet)
        .def_readonly("window_lo", &aperiodic::DecoratedPointSet::window_lo)
        .def_readonly("window_hi", &aperiodic::DecoratedPointSet::window_hi)
        .def_readonly("integral", &aperiodic::DecoratedPointSet::integral)
        .def("__len__", [](const aperiodic::DecoratedPointSet& ps) { return ps.positions.size(); })
        .def("translated", &aperiodic::DecoratedPointSet::translated, "t"_a);

    m.def("from_word",
          py::overload_cast<const aperiodic::Word&, const std::vector<double>&,
                            const std::vector<std::string>&, std::int64_t>(&aperiodic::from_word),
          "word"_a, "lengths"_a, "alphabet"_a, "origin_index"_a = 0,
          "Point set at cumulative tile lengths, letter at origin_index at 0");
    m.def("from_word",
          py::overload_cast<const aperiodic::Word&, const aperiodic::Substitution&, std::int64_t>(
              &aperiodic::from_word),
          "word"_a, "sub"_a, "origin_index"_a = 0);

    py::class_<aperiodic::Patch>(m, "Patch")
        .def_readonly("center", &aperiodic::Patch::center)
        .def_readonly("radius", &aperiodic::Patch::radius)
        .def_readonly("relative_positions", &aperiodic::Patch::relative_positions)
        .def_readonly("decorations", &aperiodic::Patch::decorations);
    m.def("patch_at", &aperiodic::patch_at, "ps"_a, "x"_a, "R"_a);

    py::class_<aperiodic::DensityEstimate>(m, "DensityEstimate")
        .def_readonly("value", &aperiodic::DensityEstimate::value)
        .def_readonly("window_lengths", &aperiodic::DensityEstimate::window_lengths)
        .def_readonly("estimates", &aperiodic::DensityEstimate::estimates);
    m.def("density", &aperiodic::density, "ps"_a);

    py::class_<aperiodic::MatchingPair>(m, "MatchingPair")
        .def_readonly("x", &aperiodic::MatchingPair::x)
        .def_readonly("y", &aperiodic::MatchingPair::y)
        .def_readonly("separation", &aperiodic::MatchingPair::separation);
    m.def("matching_pairs", &aperiodic::matching_pairs, "ps"_a, "R"_a, "max_pairs"_a,
          "Pairs of points whose R-patches agree exactly");
    m.def("letter_weights", &aperiodic::letter_weights, "ps"_a, "weight_by_letter"_a);
    m.def("pointset_to_csv", &aperiodic::pointset_to_csv, "ps"_a);
}

void register_diffraction(py::module_& m) {
    m.def("bt_amplitude",
          py::overload_cast<const aperiodic::DecoratedPointSet&, const std::vector<double>&, double,
                            double, double>(&aperiodic::bt_amplitude),
          "ps"_a, "weights"_a, "k"_a, "lo"_a, "hi"_a,
          "Normalized exponential sum over the window [lo, hi)");
    m.def("bt_amplitude",
          py::overload_cast<const aperiodic::DecoratedPointSet&, const std::vector<double>&, double,
                            double>(&aperiodic::bt_amplitude),
          "ps"_a, "weights"_a, "k"_a, "halfwidth"_a);
    m.def("autocorrelation", &aperiodic::autocorrelation, "ps"_a, "weights"_a, "halfwidth"_a,
          "z_max"_a);

    py::class_<aperiodic::DiffractionSample>(m, "DiffractionSample")
        .def_readonly("k", &aperiodic::DiffractionSample::k)
        .def_readonly("window", &aperiodic::DiffractionSample::window)
        .def_readonly("amplitude", &aperiodic::DiffractionSample::amplitude)
        .def_readonly("intensity", &aperiodic::DiffractionSample::intensity);
    py::class_<aperiodic::PeakVerdict>(m, "PeakVerdict")
        .def_readonly("k", &aperiodic::PeakVerdict::k)
        .def_readonly("intensity", &aperiodic::PeakVerdict::intensity)
        .def_readonly("verdict", &aperiodic::PeakVerdict::verdict)
        .def_readonly("samples", &aperiodic::PeakVerdict::samples)
        .def("__repr__", [](const aperiodic::PeakVerdict& p) {
            std::ostringstream out;
            out << "PeakVerdict(k=" << p.k << ", verdict='" << p.verdict << "')";
            return out.str();
        });
    py::class_<aperiodic::PeakScanOptions>(m, "PeakScanOptions")
        .def(py::init([](double theta, double rel_tol, double decay_slope, double decay_r2) {
                 aperiodic::PeakScanOptions o;
                 o.theta = theta;
                 o.rel_tol = rel_tol;
                 o.decay_slope = decay_slope;
                 o.decay_r2 = decay_r2;
                 return o;
             }),
             "theta"_a = aperiodic::PeakScanOptions{}.theta,
             "rel_tol"_a = aperiodic::PeakScanOptions{}.rel_tol,
             "decay_slope"_a = aperiodic::PeakScanOptions{}.decay_slope,
             "decay_r2"_a = aperiodic::PeakScanOptions{}.decay_r2)
        .def_readwrite("theta", &aperiodic::PeakScanOptions::theta)
        .def_readwrite("rel_tol", &aperiodic::PeakScanOptions::rel_tol)
        .def_readwrite("decay_slope", &aperiodic::PeakScanOptions::decay_slope)
        .def_readwrite("decay_r2", &aperiodic::PeakScanOptions::decay_r2);
    m.def("peak_scan", &aperiodic::peak_scan, "ps"_a, "weights"_a, "k_list"_a,
          "window_schedule"_a, "opts"_a = aperiodic::PeakScanOptions{},
          "Classify each k as bragg / decaying / undecided over the window schedule");
    m.def("decay_exponent", &aperiodic::decay_exponent, "ps"_a, "weights"_a, "k"_a,
          "window_schedule"_a,
          "Least-squares slope of log intensity against log window length");
}

void register_eigenvalues(py::module_& m) {
    m.def("discrepancy_over_pairs", &aperiodic::discrepancy_over_pairs, "pairs"_a, "k"_a);
    py::class_<aperiodic::DiscrepancySample>(m, "DiscrepancySample")
        .def_readonly("radius", &aperiodic::DiscrepancySample::radius)
        .def_readonly("discrepancy", &aperiodic::DiscrepancySample::discrepancy)
        .def_readonly("pairs_used", &aperiodic::DiscrepancySample::pairs_used);
    m.def("eigenvalue_discrepancy", &aperiodic::eigenvalue_discrepancy, "ps"_a, "k"_a, "R"_a,
          "max_pairs"_a);

    py::class_<aperiodic::EigenvalueTestOptions>(m, "EigenvalueTestOptions")
        .def(py::init([](std::vector<double> radii, double tol, double rejection_floor,
                         std::size_t max_pairs) {
                 aperiodic::EigenvalueTestOptions o;
                 o.radii = std::move(radii);
                 o.tol = tol;
                 o.rejection_floor = rejection_floor;
                 o.max_pairs = max_pairs;
                 return o;
             }),
             "radii"_a = aperiodic::EigenvalueTestOptions{}.radii,
             "tol"_a = aperiodic::EigenvalueTestOptions{}.tol,
             "rejection_floor"_a = aperiodic::EigenvalueTestOptions{}.rejection_floor,
             "max_pairs"_a = aperiodic::EigenvalueTestOptions{}.max_pairs)
        .def_readwrite("radii", &aperiodic::EigenvalueTestOptions::radii)
        .def_readwrite("tol", &aperiodic::EigenvalueTestOptions::tol)
        .def_readwrite("rejection_floor", &aperiodic::EigenvalueTestOptions::rejection_floor)
        .def_readwrite("max_pairs", &aperiodic::EigenvalueTestOptions::max_pairs);
    py::class_<aperiodic::EigenvalueReport>(m, "EigenvalueReport")
        .def_readonly("k", &aperiodic::EigenvalueReport::k)
        .def_readonly("radii", &aperiodic::EigenvalueReport::radii)
        .def_readonly("discrepancies", &aperiodic::EigenvalueReport::discrepancies)
        .def_readonly("pairs_used", &aperiodic::EigenvalueReport::pairs_used)
        .def_readonly("verdict", &aperiodic::EigenvalueReport::verdict)
        .def("__repr__", [](const aperiodic::EigenvalueReport& r) {
            std::ostringstream out;
            out << "EigenvalueReport(k=" << r.k << ", verdict='" << r.verdict << "')";
            return out.str();
        });
    m.def("eigenvalue_verdict", &aperiodic::eigenvalue_verdict, "ps"_a, "k"_a,
          "opts"_a = aperiodic::EigenvalueTestOptions{},
          "Patch-discrepancy eigenvalue test over a radius schedule");
    m.def("group_closure_check", &aperiodic::group_closure_check, "ps"_a, "k1"_a, "k2"_a, "R"_a,
          "tol"_a, "max_pairs"_a);
}

void register_spectra(py::module_& m) {
    py::class_<aperiodic::TightBindingModel>(m, "TightBindingModel")
        .def_readonly("potential_by_letter", &aperiodic::TightBindingModel::potential_by_letter)
        .def_readonly("coupling", &aperiodic::TightBindingModel::coupling)
        .def("word_of_order", &aperiodic::TightBindingModel::word_of_order, "n"_a)
        .def("potential_window", &aperiodic::TightBindingModel::potential_window, "N"_a);
    m.def("tight_binding_from_substitution", &aperiodic::tight_binding_from_substitution, "sub"_a,
          "potential_by_letter"_a, "coupling"_a = 1.0);
    m.def("tight_binding_from_word", &aperiodic::tight_binding_from_word, "word"_a,
          "potential_by_letter"_a, "coupling"_a = 1.0);
    m.def("discrete_cosine_model", &aperiodic::discrete_cosine_model, "q"_a, "coupling"_a,
          "repetitions"_a = 1, "Periodic cosine potential cos(2 pi j / q) sampled on one period");

    m.def("sturm_count", &aperiodic::sturm_count, "model"_a, "N"_a, "E"_a,
          "Eigenvalues below E of the N-site Dirichlet restriction");
    m.def("ids", &aperiodic::ids, "model"_a, "N"_a, "E"_a,
          "Integrated density of states: sturm_count / N");

    py::class_<aperiodic::TransferMatrix>(m, "TransferMatrix")
        .def_property_readonly("m",
                               [](const aperiodic::TransferMatrix& t) {
                                   return std::vector<std::vector<double>>{
                                       {t.m[0][0], t.m[0][1]}, {t.m[1][0], t.m[1][1]}};
                               })
        .def_readonly("log_scale", &aperiodic::TransferMatrix::log_scale)
        .def("det", &aperiodic::TransferMatrix::det)
        .def("trace_scaled", &aperiodic::TransferMatrix::trace_scaled);
    m.def("transfer_product", &aperiodic::transfer_product, "model"_a, "E"_a, "first_site"_a,
          "site_count"_a);
    m.def("lyapunov_exponent", &aperiodic::lyapunov_exponent, "model"_a, "E"_a, "L"_a);

    py::class_<aperiodic::Band>(m, "Band")
        .def_readonly("e_low", &aperiodic::Band::e_low)
        .def_readonly("e_high", &aperiodic::Band::e_high);
    py::class_<aperiodic::BandOptions>(m, "BandOptions")
        .def(py::init([](double e_min, double e_max, int grid, double edge_tol, int max_depth) {
                 aperiodic::BandOptions o;
                 o.e_min = e_min;
                 o.e_max = e_max;
                 o.grid = grid;
                 o.edge_tol = edge_tol;
                 o.max_depth = max_depth;
                 return o;
             }),
             "e_min"_a = aperiodic::BandOptions{}.e_min, "e_max"_a = aperiodic::BandOptions{}.e_max,
             "grid"_a = aperiodic::BandOptions{}.grid,
             "edge_tol"_a = aperiodic::BandOptions{}.edge_tol,
             "max_depth"_a = aperiodic::BandOptions{}.max_depth)
        .def_readwrite("e_min", &aperiodic::BandOptions::e_min)
        .def_readwrite("e_max", &aperiodic::BandOptions::e_max)
        .def_readwrite("grid", &aperiodic::BandOptions::grid)
        .def_readwrite("edge_tol", &aperiodic::BandOptions::edge_tol)
        .def_readwrite("max_depth", &aperiodic::BandOptions::max_depth);
    py::class_<aperiodic::BandStructure>(m, "BandStructure")
        .def_readonly("order", &aperiodic::BandStructure::order)
        .def_readonly("period", &aperiodic::BandStructure::period)
        .def_readonly("bands", &aperiodic::BandStructure::bands)
        .def_readonly("gap_labels", &aperiodic::BandStructure::gap_labels);
    m.def("band_structure", &aperiodic::band_structure, "model"_a, "order"_a,
          "opts"_a = aperiodic::BandOptions{},
          "Bands and branch-count gap labels of the order-n periodic approximant");

    py::class_<aperiodic::GapEntry>(m, "GapEntry")
        .def_readonly("e_low", &aperiodic::GapEntry::e_low)
        .def_readonly("e_high", &aperiodic::GapEntry::e_high)
        .def_readonly("label", &aperiodic::GapEntry::label)
        .def_readonly("order", &aperiodic::GapEntry::order)
        .def_readonly("stable", &aperiodic::GapEntry::stable)
        .def("__repr__", [](const aperiodic::GapEntry& g) {
            std::ostringstream out;
            out << "GapEntry(label=" << g.label << ", e_low=" << g.e_low << ", e_high=" << g.e_high
                << ", stable=" << (g.stable ? "True" : "False") << ")";
            return out.str();
        });
    py::class_<aperiodic::GapReport>(m, "GapReport")
        .def_readonly("gaps", &aperiodic::GapReport::gaps)
        .def("__len__", [](const aperiodic::GapReport& r) { return r.gaps.size(); });
    py::class_<aperiodic::GapTrackingOptions>(m, "GapTrackingOptions")
        .def(py::init([](std::vector<int> orders, double edge_tol, double label_tol, double ids_tol,
                         std::int64_t ids_window, aperiodic::BandOptions band,
                         double min_gap_width) {
                 aperiodic::GapTrackingOptions o;
                 o.orders = std::move(orders);
                 o.edge_tol = edge_tol;
                 o.label_tol = label_tol;
                 o.ids_tol = ids_tol;
                 o.ids_window = ids_window;
                 o.band = band;
                 o.min_gap_width = min_gap_width;
                 return o;
             }),
             "orders"_a, "edge_tol"_a = aperiodic::GapTrackingOptions{}.edge_tol,
             "label_tol"_a = aperiodic::GapTrackingOptions{}.label_tol,
             "ids_tol"_a = aperiodic::GapTrackingOptions{}.ids_tol,
             "ids_window"_a = aperiodic::GapTrackingOptions{}.ids_window,
             "band"_a = aperiodic::BandOptions{},
             "min_gap_width"_a = aperiodic::GapTrackingOptions{}.min_gap_width)
        .def_readwrite("orders", &aperiodic::GapTrackingOptions::orders)
        .def_readwrite("edge_tol", &aperiodic::GapTrackingOptions::edge_tol)
        .def_readwrite("label_tol", &aperiodic::GapTrackingOptions::label_tol)
        .def_readwrite("ids_tol", &aperiodic::GapTrackingOptions::ids_tol)
        .def_readwrite("ids_window", &aperiodic::GapTrackingOptions::ids_window)
        .def_readwrite("band", &aperiodic::GapTrackingOptions::band)
        .def_readwrite("min_gap_width", &aperiodic::GapTrackingOptions::min_gap_width);
    m.def("aperiodic_gap_labels", &aperiodic::aperiodic_gap_labels, "model"_a, "opts"_a,
          "Track gaps across approximant orders and confirm labels by the window IDS");

    m.def("luck_beta", &aperiodic::luck_beta, "k"_a, "N"_a,
          "Scaling exponent of the one-sided amplitude at 2 pi k from the cosine-product form");

    py::class_<aperiodic::ContinuumModel>(m, "ContinuumModel")
        .def(py::init([](std::function<double(double)> potential, double length, double step) {
                 aperiodic::ContinuumModel c;
                 c.potential = std::move(potential);
                 c.length = length;
                 c.step = step;
                 return c;
             }),
             "potential"_a, "length"_a = aperiodic::ContinuumModel{}.length,
             "step"_a = aperiodic::ContinuumModel{}.step)
        .def_readwrite("length", &aperiodic::ContinuumModel::length)
        .def_readwrite("step", &aperiodic::ContinuumModel::step);
    m.def("prufer_rotation_number", &aperiodic::prufer_rotation_number, "model"_a, "E"_a,
          "Rotation number of the phase flow of -y'' + V y = E y on [0, length]");
}

void register_gaplabel(py::module_& m) {
    py::class_<aperiodic::ModuleGenerator>(m, "ModuleGenerator")
        .def(py::init([](double value, std::string exact) {
                 return aperiodic::ModuleGenerator{value, std::move(exact)};
             }),
             "value"_a, "exact"_a = std::string{})
        .def_readwrite("value", &aperiodic::ModuleGenerator::value)
        .def_readwrite("exact", &aperiodic::ModuleGenerator::exact);
    py::class_<aperiodic::RealModule>(m, "RealModule",
                                      "Finitely generated subgroup of the reals, with optional "
                                      "prime-power denominators")
        .def(py::init([](std::vector<aperiodic::ModuleGenerator> generators,
                         std::vector<int> denominator_primes, std::string scale) {
                 aperiodic::RealModule mod;
                 mod.generators = std::move(generators);
                 mod.denominator_primes = std::move(denominator_primes);
                 mod.scale = std::move(scale);
                 return mod;
             }),
             "generators"_a, "denominator_primes"_a = std::vector<int>{}, "scale"_a = "1")
        .def_readwrite("generators", &aperiodic::RealModule::generators)
        .def_readwrite("denominator_primes", &aperiodic::RealModule::denominator_primes)
        .def_readwrite("scale", &aperiodic::RealModule::scale)
        .def("rank", &aperiodic::RealModule::rank)
        .def("has_denominators", &aperiodic::RealModule::has_denominators);
    m.def("module_from_json", &aperiodic::module_from_json, "json_text"_a);
    m.def("module_to_json", &aperiodic::module_to_json, "module"_a);

    m.def("bragg_to_gap_1d", &aperiodic::bragg_to_gap_1d, "k"_a);
    m.def("bragg_to_gap_d", &aperiodic::bragg_to_gap_d, "k_vectors"_a,
          "Normalized volume form of d diffraction vectors");

    py::class_<aperiodic::Coefficient>(m, "Coefficient")
        .def_readonly("numerator", &aperiodic::Coefficient::numerator)
        .def_readonly("denominator", &aperiodic::Coefficient::denominator)
        .def("value", &aperiodic::Coefficient::value)
        .def("__repr__", [](const aperiodic::Coefficient& c) {
            std::ostringstream out;
            out << "Coefficient(" << c.numerator << "/" << c.denominator << ")";
            return out.str();
        });
    py::class_<aperiodic::MembershipResult>(m, "MembershipResult")
        .def_readonly("found", &aperiodic::MembershipResult::found)
        .def_readonly("coefficients", &aperiodic::MembershipResult::coefficients)
        .def_readonly("residual", &aperiodic::MembershipResult::residual)
        .def("__bool__", [](const aperiodic::MembershipResult& r) { return r.found; });
    py::class_<aperiodic::MembershipOptions>(m, "MembershipOptions")
        .def(py::init([](double tol, long long coeff_bound, int max_denominator_exponent) {
                 aperiodic::MembershipOptions o;
                 o.tol = tol;
                 o.coeff_bound = coeff_bound;
                 o.max_denominator_exponent = max_denominator_exponent;
                 return o;
             }),
             "tol"_a = aperiodic::MembershipOptions{}.tol,
             "coeff_bound"_a = aperiodic::MembershipOptions{}.coeff_bound,
             "max_denominator_exponent"_a = aperiodic::MembershipOptions{}.max_denominator_exponent)
        .def_readwrite("tol", &aperiodic::MembershipOptions::tol)
        .def_readwrite("coeff_bound", &aperiodic::MembershipOptions::coeff_bound)
        .def_readwrite("max_denominator_exponent",
                       &aperiodic::MembershipOptions::max_denominator_exponent);
    m.def("membership", &aperiodic::membership, "module"_a, "x"_a,
          "opts"_a = aperiodic::MembershipOptions{},
          "Coefficients expressing x in the module, or found=False");
    m.def("subgroup_index", &aperiodic::subgroup_index, "a"_a, "b"_a,
          "Index [b : a] when a is finite-index in b, else None");
    m.def("rescale_for_tight_binding", &aperiodic::rescale_for_tight_binding, "module"_a,
          "dens"_a);
    m.def("module_from_bragg", &aperiodic::module_from_bragg, "e_top"_a,
          "Gap-label module generated by the normalized diffraction positions");
    m.def("exact_descriptor_value", &aperiodic::exact_descriptor_value, "exact"_a);
}

void register_presets(py::module_& m) {
    m.def("preset_substitution", &aperiodic::preset_substitution, "name"_a);
    m.def("is_preset_name", &aperiodic::is_preset_name, "name"_a);
    m.def("preset_names", &aperiodic::preset_names);
    m.def("preset_potential", &aperiodic::preset_potential, "sub"_a);
    m.def("thue_morse_e_top", &aperiodic::thue_morse_e_top);
    m.def("thue_morse_gap_module", &aperiodic::thue_morse_gap_module);
    m.def("fibonacci_gap_module", &aperiodic::fibonacci_gap_module);
}

}  // namespace

PYBIND11_MODULE(aperiodic, m) {
    m.doc() =
        "Spectra, diffraction, and gap labelling for one-dimensional aperiodic chains: "
        "substitution sequences, decorated point sets, the patch-discrepancy eigenvalue "
        "test, periodic-approximant band structures, and membership in gap-label modules.";

    register_errors(m);
    register_substitution(m);
    register_pointset(m);
    register_diffraction(m);
    register_eigenvalues(m);
    register_spectra(m);
    register_gaplabel(m);
    register_presets(m);
}
