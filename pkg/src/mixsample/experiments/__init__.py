"""Seeded benchmark sweeps, their configuration and their outputs."""

from .config import FULL_SCALE, SweepConfig, dump_config, load_config, parse_config
from .outputs import CSV_HEADER, emit_outputs, read_manifest_command, write_csv
from .sweeps import (
    AggregateRow,
    SweepResult,
    TrialRecord,
    aggregate,
    bound_table,
    pulse_table,
    run_polarization_study,
    run_purity_sweep,
    run_sample_size_sweep,
    run_spectrum_comparison,
    spectrum_tables,
    trial_seed,
)
