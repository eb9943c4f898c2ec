"""Deterministic simulator of a cascaded-encoding quantum secret sharing protocol."""

from qss_sim._core import (
    AttackKind,
    AttackStrategy,
    Basis,
    CheckResult,
    CheckStage,
    Gate,
    Group,
    KnowledgeSubset,
    MeasuredQubit,
    PartyId,
    PartySecret,
    PnsMode,
    PositionSecrecy,
    ProtocolConfig,
    ProtocolOutcome,
    QubitState,
    ReplayResult,
    Rng,
    RunRecord,
    SecrecyReport,
    StateLabel,
    Verdict,
    alice,
    all_knowledge_subsets,
    apply_gate,
    apply_label,
    bob,
    derive_run_seed,
    equal_up_to_phase,
    fidelity,
    has_full_alice_group,
    has_full_bob_group,
    measure,
    predicted_key_length,
    prepare,
    replay_transcript,
    run_experiment_json,
    run_protocol,
    secrecy_check,
    validate_config,
    wilson_interval,
)

__all__ = [
    "AttackKind",
    "AttackStrategy",
    "Basis",
    "CheckResult",
    "CheckStage",
    "Gate",
    "Group",
    "KnowledgeSubset",
    "MeasuredQubit",
    "PartyId",
    "PartySecret",
    "PnsMode",
    "PositionSecrecy",
    "ProtocolConfig",
    "ProtocolOutcome",
    "QubitState",
    "ReplayResult",
    "Rng",
    "RunRecord",
    "SecrecyReport",
    "StateLabel",
    "Verdict",
    "alice",
    "all_knowledge_subsets",
    "apply_gate",
    "apply_label",
    "bob",
    "derive_run_seed",
    "equal_up_to_phase",
    "fidelity",
    "has_full_alice_group",
    "has_full_bob_group",
    "measure",
    "predicted_key_length",
    "prepare",
    "replay_transcript",
    "run_experiment_json",
    "run_protocol",
    "secrecy_check",
    "validate_config",
    "wilson_interval",
]
