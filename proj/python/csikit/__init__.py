# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2026 The csikit authors
"""Massive MIMO CSI toolkit: channel synthesis, precoding, scheduling and localisation."""

from ._core import (  # noqa: F401
    DatasetError,
    campaign_plan,
    def_schedule,
    extract_features,
    group_spectral_efficiency,
    leave_one_out,
    los_channel,
    max_served_users,
    mrt_weights,
    pilot_frequencies,
    random_schedule,
    read_sample,
    received_power,
    run_cli,
    sus_select,
    topology,
    write_sample,
    zf_weights,
)

__version__ = "0.1.0"
