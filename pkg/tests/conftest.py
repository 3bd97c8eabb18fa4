"""Shared fixtures.

The seed fleet below drives the end-to-end and calibration-prefix
acceptance checks. It is session-scoped because generating and encoding
ten full-length scenarios costs over a minute; both checks read the
same table.
"""

from dataclasses import dataclass

import numpy as np
import pytest

from icegaze import (
    ScenarioSpec,
    confusion,
    encode,
    filter_confidence,
    fit_encoder,
    fit_encoder_prefix,
    generate,
    metrics,
)

FLEET_SEEDS = tuple(range(10))


@dataclass(frozen=True)
class FleetRow:
    seed: int
    f1_one_minute: float
    f1_four_minutes: float
    f1_full: float


@pytest.fixture(scope="session")
def default_scenario_fleet():
    """F1 per seed for 1 min / 4 min / full calibration prefixes.

    Everything runs on the default scenario; only the seed varies.
    Scores are on-target F1 against the planted truth labels, computed
    over all frames (low-confidence frames encode as Missing and are
    excluded by the confusion pairing).
    """
    rows = []
    for seed in FLEET_SEEDS:
        spec = ScenarioSpec.from_dict(
            {**ScenarioSpec().to_dict(), "rng_seed": seed})
        labeled = generate(spec)
        filtered, mask = filter_confidence(labeled.trace)
        truth = labeled.on_target

        def f1_for(encoder):
            coded = encode(encoder, labeled.trace, mask)
            return metrics(confusion(coded, truth)).f1

        rows.append(FleetRow(
            seed=seed,
            f1_one_minute=f1_for(fit_encoder_prefix(filtered, 60.0)),
            f1_four_minutes=f1_for(fit_encoder_prefix(filtered, 240.0)),
            f1_full=f1_for(fit_encoder(filtered)),
        ))
    return rows
