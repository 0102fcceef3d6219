#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ofdmici/channel.hpp"
#include "ofdmici/ekf_offset.hpp"
#include "ofdmici/harness.hpp"
#include "ofdmici/ici.hpp"
#include "ofdmici/ml_offset.hpp"
#include "ofdmici/self_cancel.hpp"

namespace py = pybind11;
using namespace ofdmici;

PYBIND11_MODULE(_core, m) {
  m.doc() = "OFDM carrier-frequency-offset / ICI mitigation core";
  m.attr("__version__") = std::string(kVersion);

  py::enum_<ModulationKind>(m, "ModulationKind")
      .value("PSK", ModulationKind::Psk)
      .value("QAM", ModulationKind::Qam);

  py::class_<ModulationScheme>(m, "ModulationScheme")
      .def(py::init<ModulationKind, int>(), py::arg("kind"), py::arg("order"))
      .def_static("parse", &ModulationScheme::parse, py::arg("name"))
      .def_property_readonly("kind", &ModulationScheme::kind)
      .def_property_readonly("order", &ModulationScheme::order)
      .def_property_readonly("bits_per_symbol", &ModulationScheme::bits_per_symbol)
      .def_property_readonly("points", &ModulationScheme::points)
      .def("name", &ModulationScheme::name)
      .def("__repr__",
           [](const ModulationScheme& s) { return "ModulationScheme('" + s.name() + "')"; });

  py::class_<OfdmConfig>(m, "OfdmConfig")
      .def(py::init<int, int, ModulationScheme>(), py::arg("fft_size"),
           py::arg("active_carriers"), py::arg("modulation"))
      .def_readonly("fft_size", &OfdmConfig::fft_size)
      .def_readonly("active_carriers", &OfdmConfig::active_carriers)
      .def_readonly("modulation", &OfdmConfig::modulation);

  py::class_<FrequencySymbols>(m, "FrequencySymbols")
      .def(py::init<>())
      .def(py::init([](ComplexVec values) { return FrequencySymbols{std::move(values)}; }),
           py::arg("values"))
      .def_readwrite("values", &FrequencySymbols::values);

  py::class_<TimeSamples>(m, "TimeSamples")
      .def(py::init<>())
      .def(py::init([](ComplexVec values, std::int64_t start_index) {
             return TimeSamples{std::move(values), start_index};
           }),
           py::arg("values"), py::arg("start_index") = 0)
      .def_readwrite("values", &TimeSamples::values)
      .def_readwrite("start_index", &TimeSamples::start_index);

  py::class_<SeededRng>(m, "SeededRng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next_u64", &SeededRng::next_u64)
      .def("uniform01", &SeededRng::uniform01)
      .def("gaussian", &SeededRng::gaussian)
      .def("complex_gaussian", &SeededRng::complex_gaussian);

  m.def("map_bits", &map_bits, py::arg("bits"), py::arg("scheme"));
  m.def("demap_symbols", &demap_symbols, py::arg("points"), py::arg("scheme"));
  m.def("ofdm_modulate", &ofdm_modulate, py::arg("symbols"), py::arg("config"));
  m.def("ofdm_demodulate", &ofdm_demodulate, py::arg("samples"), py::arg("config"));
  m.def("place_payload", &place_payload, py::arg("payload"), py::arg("config"));

  py::class_<NoiseSpec>(m, "NoiseSpec")
      .def_readonly("ebn0_db", &NoiseSpec::ebn0_db)
      .def_readonly("sigma2_freq", &NoiseSpec::sigma2_freq)
      .def("sigma2_time", &NoiseSpec::sigma2_time, py::arg("fft_size"));

  m.def("ebn0_to_sigma", &ebn0_to_sigma, py::arg("ebn0_db"), py::arg("scheme"));
  m.def(
      "apply_cfo",
      [](const TimeSamples& samples, double epsilon, const OfdmConfig& config) {
        return apply_cfo(samples, {epsilon}, config);
      },
      py::arg("samples"), py::arg("epsilon"), py::arg("config"));
  m.def("add_awgn", &add_awgn, py::arg("samples"), py::arg("noise"), py::arg("config"),
        py::arg("rng"));

  py::enum_<CirVariant>(m, "CirVariant")
      .value("STANDARD", CirVariant::Standard)
      .value("SELF_CANCEL", CirVariant::SelfCancel);

  py::class_<CirPoint>(m, "CirPoint")
      .def_readonly("epsilon", &CirPoint::epsilon)
      .def_readonly("cir_db", &CirPoint::cir_db)
      .def_readonly("variant", &CirPoint::variant);

  m.def("ici_coefficient", &ici_coefficient, py::arg("d"), py::arg("epsilon"), py::arg("fft_size"));
  m.def("sc_mod_coefficient", &sc_mod_coefficient, py::arg("d"), py::arg("epsilon"),
        py::arg("fft_size"));
  m.def("sc_demod_coefficient", &sc_demod_coefficient, py::arg("d"), py::arg("epsilon"),
        py::arg("fft_size"));
  m.def("cir_standard", &cir_standard, py::arg("epsilon"), py::arg("fft_size"));
  m.def("cir_self_cancel", &cir_self_cancel, py::arg("epsilon"), py::arg("fft_size"));

  m.def("sc_encode", &sc_encode, py::arg("payload"), py::arg("config"));
  m.def("sc_decode", &sc_decode, py::arg("received"), py::arg("config"));

  py::enum_<EstimatorMethod>(m, "EstimatorMethod")
      .value("ML", EstimatorMethod::Ml)
      .value("EKF", EstimatorMethod::Ekf);

  py::class_<OffsetEstimate>(m, "OffsetEstimate")
      .def(py::init([](double eps, EstimatorMethod method) {
             return OffsetEstimate{eps, method};
           }),
           py::arg("epsilon_hat"), py::arg("method") = EstimatorMethod::Ml)
      .def_readonly("epsilon_hat", &OffsetEstimate::epsilon_hat)
      .def_readonly("method", &OffsetEstimate::method);

  py::class_<RepeatedObservation>(m, "RepeatedObservation")
      .def(py::init([](FrequencySymbols y1, FrequencySymbols y2, int k_range) {
             return RepeatedObservation{std::move(y1), std::move(y2), k_range};
           }),
           py::arg("first_half"), py::arg("second_half"), py::arg("k_range") = kAllActiveCarriers)
      .def_readwrite("first_half", &RepeatedObservation::first_half)
      .def_readwrite("second_half", &RepeatedObservation::second_half)
      .def_readwrite("k_range", &RepeatedObservation::k_range);

  m.def("ml_frame_build", &ml_frame_build, py::arg("symbols"), py::arg("config"));
  m.def("ml_estimate", &ml_estimate, py::arg("observation"), py::arg("config"));
  m.def("ml_correct", &ml_correct, py::arg("samples"), py::arg("estimate"), py::arg("config"));

  py::class_<EkfState>(m, "EkfState")
      .def_readonly("epsilon_hat", &EkfState::epsilon_hat)
      .def_readonly("error_variance", &EkfState::error_variance)
      .def_readonly("iteration", &EkfState::iteration);

  py::class_<Preamble>(m, "Preamble")
      .def(py::init([](TimeSamples tx, TimeSamples rx, double sigma2, int fft_size) {
             return Preamble{std::move(tx), std::move(rx), sigma2, fft_size};
           }),
           py::arg("transmitted"), py::arg("received"), py::arg("sigma2"), py::arg("fft_size"))
      .def_readwrite("transmitted", &Preamble::transmitted)
      .def_readwrite("received", &Preamble::received)
      .def_readwrite("sigma2", &Preamble::sigma2)
      .def_readwrite("fft_size", &Preamble::fft_size);

  py::enum_<EkfGainForm>(m, "EkfGainForm")
      .value("STANDARD", EkfGainForm::Standard)
      .value("UNSCALED_INNOVATION", EkfGainForm::UnscaledInnovation);

  py::class_<EkfResult>(m, "EkfResult")
      .def_readonly("estimate", &EkfResult::estimate)
      .def_readonly("trace", &EkfResult::trace);

  m.def("ekf_estimate", &ekf_estimate, py::arg("preamble"), py::arg("init_epsilon"),
        py::arg("init_error_variance"), py::arg("form") = kDefaultEkfGainForm);
  m.def("ekf_correct", &ekf_correct, py::arg("samples"), py::arg("estimate"), py::arg("config"));
  m.def("preamble_pilot_bins", &preamble_pilot_bins, py::arg("config"));
  m.def("preamble_time_samples", &preamble_time_samples, py::arg("config"));

  py::enum_<MitigationScheme>(m, "MitigationScheme")
      .value("NONE", MitigationScheme::None)
      .value("SELF_CANCEL", MitigationScheme::SelfCancel)
      .value("ML_REPEAT", MitigationScheme::MlRepeat)
      .value("EKF_PREAMBLE", MitigationScheme::EkfPreamble);

  m.def("scheme_name", &scheme_name, py::arg("scheme"));
  m.def("parse_scheme", &parse_scheme, py::arg("name"));

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init([](OfdmConfig config, std::vector<MitigationScheme> schemes,
                       std::vector<double> epsilons, std::vector<double> ebn0_db,
                       std::int64_t symbols_per_point, std::uint64_t base_seed,
                       std::int64_t max_bits) {
             return SweepConfig{std::move(config), std::move(schemes), std::move(epsilons),
                                std::move(ebn0_db), symbols_per_point, base_seed, max_bits};
           }),
           py::arg("config"), py::arg("schemes"), py::arg("epsilons"), py::arg("ebn0_db"),
           py::arg("symbols_per_point") = 1000, py::arg("base_seed") = 1, py::arg("max_bits") = 0)
      .def_readwrite("config", &SweepConfig::config)
      .def_readwrite("schemes", &SweepConfig::schemes)
      .def_readwrite("epsilons", &SweepConfig::epsilons)
      .def_readwrite("ebn0_db", &SweepConfig::ebn0_db)
      .def_readwrite("symbols_per_point", &SweepConfig::symbols_per_point)
      .def_readwrite("base_seed", &SweepConfig::base_seed)
      .def_readwrite("max_bits", &SweepConfig::max_bits);

  py::class_<BerRecord>(m, "BerRecord")
      .def_readonly("scheme", &BerRecord::scheme)
      .def_readonly("modulation", &BerRecord::modulation)
      .def_readonly("epsilon", &BerRecord::epsilon)
      .def_readonly("ebn0_db", &BerRecord::ebn0_db)
      .def_readonly("bits_sent", &BerRecord::bits_sent)
      .def_readonly("bit_errors", &BerRecord::bit_errors)
      .def_readonly("ber", &BerRecord::ber)
      .def_readonly("throughput_factor", &BerRecord::throughput_factor)
      .def_readonly("seed", &BerRecord::seed)
      .def("__repr__", [](const BerRecord& r) {
        return "BerRecord(" + scheme_name(r.scheme) + ", " + r.modulation +
               ", eps=" + format_real17(r.epsilon) + ", ebn0=" + format_real17(r.ebn0_db) +
               ", ber=" + format_real17(r.ber) + ")";
      });

  py::class_<CirSweepRow>(m, "CirSweepRow")
      .def_readonly("standard", &CirSweepRow::standard)
      .def_readonly("self_cancel", &CirSweepRow::self_cancel);

  py::class_<EstimatorStats>(m, "EstimatorStats")
      .def_readonly("mean_error", &EstimatorStats::mean_error)
      .def_readonly("rmse", &EstimatorStats::rmse)
      .def_readonly("median_abs_error", &EstimatorStats::median_abs_error);

  m.def("run_ber_sweep", &run_ber_sweep, py::arg("sweep"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_cir_sweep", &run_cir_sweep, py::arg("fft_size"), py::arg("epsilon_grid"));
  m.def("measure_estimator_stats", &measure_estimator_stats, py::arg("method"),
        py::arg("epsilon"), py::arg("ebn0_db"), py::arg("trials"), py::arg("seed"),
        py::arg("config"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "write_results",
      [](const std::vector<BerRecord>& records, const std::string& path) {
        write_results(records, path);
      },
      py::arg("records"), py::arg("path"));
  m.def(
      "load_sweep_config",
      [](const std::string& path) { return load_sweep_config(path); }, py::arg("path"));
  m.def("parse_value_grid", &parse_value_grid, py::arg("text"));
  m.def("derive_point_seed", &derive_point_seed, py::arg("base_seed"), py::arg("scheme"),
        py::arg("modulation"), py::arg("epsilon"), py::arg("ebn0_db"));
}
