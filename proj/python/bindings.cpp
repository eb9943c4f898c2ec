#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <stdexcept>

#include "qss/experiment.hpp"
#include "qss/protocol.hpp"
#include "qss/qubit.hpp"
#include "qss/rng.hpp"
#include "qss/secrecy.hpp"

namespace py = pybind11;

namespace {

nlohmann::json parse_json(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string(what) + " is not valid JSON: " +
                                e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "deterministic simulator of a cascaded-encoding quantum secret sharing "
      "protocol";

  py::enum_<qss::Basis>(m, "Basis")
      .value("Z", qss::Basis::Z)
      .value("X", qss::Basis::X);

  py::enum_<qss::Gate>(m, "Gate")
      .value("Sigma0", qss::Gate::Sigma0)
      .value("Sigma1", qss::Gate::Sigma1)
      .value("Sigma2", qss::Gate::Sigma2)
      .value("Sigma3", qss::Gate::Sigma3)
      .value("Hadamard", qss::Gate::Hadamard)
      .value("Identity", qss::Gate::Identity);

  py::class_<qss::StateLabel>(m, "StateLabel")
      .def(py::init([](int value_bit, int basis_bit) {
             if ((value_bit & ~1) || (basis_bit & ~1))
               throw std::invalid_argument("label bits must be 0 or 1");
             return qss::StateLabel{static_cast<std::uint8_t>(value_bit),
                                    static_cast<std::uint8_t>(basis_bit)};
           }),
           py::arg("value_bit") = 0, py::arg("basis_bit") = 0)
      .def_readwrite("value_bit", &qss::StateLabel::value_bit)
      .def_readwrite("basis_bit", &qss::StateLabel::basis_bit)
      .def("basis", &qss::StateLabel::basis)
      .def(py::self == py::self)
      .def("__repr__", [](const qss::StateLabel& label) {
        return "StateLabel(value_bit=" + std::to_string(label.value_bit) +
               ", basis_bit=" + std::to_string(label.basis_bit) + ")";
      });

  py::class_<qss::QubitState>(m, "QubitState")
      .def(py::init<qss::Complex, qss::Complex>(), py::arg("amp0"),
           py::arg("amp1"))
      .def_property_readonly("amp0", &qss::QubitState::amp0)
      .def_property_readonly("amp1", &qss::QubitState::amp1)
      .def(py::self == py::self);

  m.def("prepare", &qss::prepare, py::arg("label"));
  m.def("apply_gate", &qss::apply_gate, py::arg("state"), py::arg("gate"));
  m.def("apply_label", &qss::apply_label, py::arg("label"), py::arg("gate"));
  m.def("fidelity", &qss::fidelity, py::arg("u"), py::arg("v"));
  m.def("equal_up_to_phase", &qss::equal_up_to_phase, py::arg("u"),
        py::arg("v"), py::arg("tolerance") = qss::kAlgebraTolerance);
  m.def(
      "measure",
      [](const qss::QubitState& state, qss::Basis basis, qss::Rng& rng) {
        return qss::measure(state, basis, rng);
      },
      py::arg("state"), py::arg("basis"), py::arg("rng"));

  py::class_<qss::Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next_u64", &qss::Rng::next_u64)
      .def("uniform01", &qss::Rng::uniform01)
      .def("uniform_below", &qss::Rng::uniform_below, py::arg("bound"))
      .def("bernoulli", &qss::Rng::bernoulli, py::arg("p"));

  m.def("derive_run_seed", &qss::derive_run_seed, py::arg("seed_base"),
        py::arg("config_index"), py::arg("run_index"));

  py::enum_<qss::Group>(m, "Group")
      .value("Alices", qss::Group::Alices)
      .value("Bobs", qss::Group::Bobs);

  py::class_<qss::PartyId>(m, "PartyId")
      .def_readonly("group", &qss::PartyId::group)
      .def_readonly("index", &qss::PartyId::index)
      .def(py::self == py::self)
      .def("__str__",
           [](const qss::PartyId& id) { return qss::to_string(id); })
      .def("__repr__", [](const qss::PartyId& id) {
        return "PartyId('" + qss::to_string(id) + "')";
      });
  m.def("alice", &qss::alice, py::arg("index"));
  m.def("bob", &qss::bob, py::arg("index"));

  py::class_<qss::PartySecret>(m, "PartySecret")
      .def_readonly("party", &qss::PartySecret::party)
      .def_readonly("op_string", &qss::PartySecret::op_string)
      .def_readonly("had_string", &qss::PartySecret::had_string);

  py::enum_<qss::AttackKind>(m, "AttackKind")
      .value("NoAttack", qss::AttackKind::None)
      .value("InterceptResendZ", qss::AttackKind::InterceptResendZ)
      .value("InterceptResendX", qss::AttackKind::InterceptResendX)
      .value("InterceptResendRandom", qss::AttackKind::InterceptResendRandom)
      .value("MeasureAll", qss::AttackKind::MeasureAll)
      .value("EntanglingProbe", qss::AttackKind::EntanglingProbe)
      .value("InvisiblePhotonRider", qss::AttackKind::InvisiblePhotonRider)
      .value("MultiPhotonTrojan", qss::AttackKind::MultiPhotonTrojan);

  py::class_<qss::AttackStrategy>(m, "AttackStrategy")
      .def(py::init<>())
      .def(py::init([](qss::AttackKind kind, double coverage) {
             return qss::AttackStrategy{kind, coverage};
           }),
           py::arg("kind"), py::arg("coverage"))
      .def_readwrite("kind", &qss::AttackStrategy::kind)
      .def_readwrite("coverage", &qss::AttackStrategy::coverage)
      .def(py::self == py::self);

  py::enum_<qss::PnsMode>(m, "PnsMode")
      .value("Ge2", qss::PnsMode::Ge2)
      .value("Gt2", qss::PnsMode::Gt2);

  py::class_<qss::ProtocolConfig>(m, "ProtocolConfig")
      .def(py::init<>())
      .def_readwrite("alices", &qss::ProtocolConfig::alices)
      .def_readwrite("bobs", &qss::ProtocolConfig::bobs)
      .def_readwrite("block_size", &qss::ProtocolConfig::block_size)
      .def_readwrite("sample_fraction", &qss::ProtocolConfig::sample_fraction)
      .def_readwrite("error_threshold", &qss::ProtocolConfig::error_threshold)
      .def_readwrite("attack_plan", &qss::ProtocolConfig::attack_plan)
      .def_readwrite("seed", &qss::ProtocolConfig::seed)
      .def_readwrite("pns_mode", &qss::ProtocolConfig::pns_mode)
      .def_readwrite("pns_idealized", &qss::ProtocolConfig::pns_idealized)
      .def_readwrite("record_transcript",
                     &qss::ProtocolConfig::record_transcript)
      .def_static("from_json",
                  [](const std::string& text) {
                    return qss::config_from_json(parse_json(text, "config"));
                  })
      .def("to_json", [](const qss::ProtocolConfig& config) {
        return qss::config_to_json(config).dump();
      });

  m.def("validate_config", &qss::validate_config, py::arg("config"));
  m.def("predicted_key_length", &qss::predicted_key_length, py::arg("config"));

  py::enum_<qss::Verdict>(m, "Verdict")
      .value("Accept", qss::Verdict::Accept)
      .value("AbortAtHop", qss::Verdict::AbortAtHop)
      .value("AbortFinalCheck", qss::Verdict::AbortFinalCheck);

  py::enum_<qss::CheckStage>(m, "CheckStage")
      .value("Receive", qss::CheckStage::Receive)
      .value("FinalSample", qss::CheckStage::FinalSample)
      .value("Group", qss::CheckStage::Group);

  py::class_<qss::CheckResult>(m, "CheckResult")
      .def_readonly("stage", &qss::CheckResult::stage)
      .def_readonly("party", &qss::CheckResult::party)
      .def_readonly("sample_count", &qss::CheckResult::sample_count)
      .def_readonly("usable", &qss::CheckResult::usable)
      .def_readonly("errors", &qss::CheckResult::errors)
      .def_readonly("error_rate", &qss::CheckResult::error_rate)
      .def_readonly("multi_photon_detected",
                    &qss::CheckResult::multi_photon_detected)
      .def_readonly("lost_signal", &qss::CheckResult::lost_signal)
      .def_readonly("proceed", &qss::CheckResult::proceed);

  py::class_<qss::MeasuredQubit>(m, "MeasuredQubit")
      .def_readonly("origin", &qss::MeasuredQubit::origin)
      .def_readonly("basis", &qss::MeasuredQubit::basis)
      .def_readonly("outcome", &qss::MeasuredQubit::outcome);

  py::class_<qss::RunRecord>(m, "RunRecord")
      .def_readonly("config", &qss::RunRecord::config)
      .def_readonly("encoders", &qss::RunRecord::encoders)
      .def_readonly("measured", &qss::RunRecord::measured)
      .def_readonly("key_positions", &qss::RunRecord::key_positions);

  py::class_<qss::ProtocolOutcome>(m, "ProtocolOutcome")
      .def_readonly("verdict", &qss::ProtocolOutcome::verdict)
      .def_readonly("abort_party", &qss::ProtocolOutcome::abort_party)
      .def_readonly("abort_reason", &qss::ProtocolOutcome::abort_reason)
      .def_readonly("checks", &qss::ProtocolOutcome::checks)
      .def_readonly("key_positions", &qss::ProtocolOutcome::key_positions)
      .def_readonly("final_key", &qss::ProtocolOutcome::final_key)
      .def_readonly("alice_key", &qss::ProtocolOutcome::alice_key)
      .def_readonly("bob_key", &qss::ProtocolOutcome::bob_key)
      .def_readonly("key_agreement", &qss::ProtocolOutcome::key_agreement)
      .def_readonly("record", &qss::ProtocolOutcome::record)
      .def_property_readonly("transcript_text",
                             [](const qss::ProtocolOutcome& out) {
                               return out.transcript.text();
                             });

  m.def("run_protocol", &qss::run_protocol, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<qss::ReplayResult>(m, "ReplayResult")
      .def_readonly("identical", &qss::ReplayResult::identical)
      .def_readonly("logged_lines", &qss::ReplayResult::logged_lines)
      .def_readonly("replayed_lines", &qss::ReplayResult::replayed_lines)
      .def_readonly("first_divergence", &qss::ReplayResult::first_divergence);

  m.def("replay_transcript", &qss::replay_transcript,
        py::arg("transcript_text"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<qss::KnowledgeSubset>(m, "KnowledgeSubset")
      .def(py::init<>())
      .def(py::init([](std::vector<int> alices, std::vector<int> bobs,
                       bool outcomes) {
             qss::KnowledgeSubset subset;
             subset.alice_indices = std::move(alices);
             subset.bob_indices = std::move(bobs);
             subset.bob_n_outcomes = outcomes;
             return subset;
           }),
           py::arg("alices"), py::arg("bobs"), py::arg("outcomes") = false)
      .def_readwrite("alice_indices", &qss::KnowledgeSubset::alice_indices)
      .def_readwrite("bob_indices", &qss::KnowledgeSubset::bob_indices)
      .def_readwrite("bob_n_outcomes", &qss::KnowledgeSubset::bob_n_outcomes)
      .def(py::self == py::self);

  m.def("has_full_alice_group", &qss::has_full_alice_group, py::arg("subset"),
        py::arg("alices"));
  m.def("has_full_bob_group", &qss::has_full_bob_group, py::arg("subset"),
        py::arg("bobs"));
  m.def("all_knowledge_subsets", &qss::all_knowledge_subsets,
        py::arg("alices"), py::arg("bobs"));

  py::class_<qss::PositionSecrecy>(m, "PositionSecrecy")
      .def_readonly("position", &qss::PositionSecrecy::position)
      .def_readonly("p_zero", &qss::PositionSecrecy::p_zero)
      .def_readonly("p_one", &qss::PositionSecrecy::p_one)
      .def_readonly("min_entropy_bits", &qss::PositionSecrecy::min_entropy_bits);

  py::class_<qss::SecrecyReport>(m, "SecrecyReport")
      .def_readonly("subset", &qss::SecrecyReport::subset)
      .def_readonly("positions", &qss::SecrecyReport::positions)
      .def_readonly("worst_min_entropy", &qss::SecrecyReport::worst_min_entropy);

  m.def("secrecy_check", &qss::secrecy_check, py::arg("record"),
        py::arg("subset"), py::call_guard<py::gil_scoped_release>());

  m.def("wilson_interval", [](std::uint64_t successes, std::uint64_t trials) {
    const qss::WilsonInterval w = qss::wilson_interval(successes, trials);
    return py::make_tuple(w.low, w.high);
  });

  m.def(
      "run_experiment_json",
      [](const std::string& spec_text, int jobs, const std::string& format) {
        const qss::ExperimentSpec spec =
            qss::spec_from_json(parse_json(spec_text, "spec"));
        const qss::ReportFormat fmt = qss::parse_report_format(format);
        qss::ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = qss::run_experiment(spec, jobs);
        }
        return qss::emit_report(report, fmt);
      },
      py::arg("spec"), py::arg("jobs") = 1, py::arg("format") = "json");
}
