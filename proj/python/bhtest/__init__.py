# Copyright 2026 The bhtest Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Online behavioural hypothesis testing."""

from bhtest._bhtest import (
    Engine,
    Error,
    FitResult,
    SkewNormalParams,
    StepResult,
    cli_main,
    combine_differences,
    fit_check,
    run_experiment,
    score_values,
    simulate,
    sn_fit_mle,
    sn_fit_mom,
    sn_mode,
    sn_nll,
    sn_p_value,
    sn_pdf,
    validate_distribution,
)

__all__ = [
    "Engine",
    "Error",
    "FitResult",
    "SkewNormalParams",
    "StepResult",
    "cli_main",
    "combine_differences",
    "fit_check",
    "run_experiment",
    "score_values",
    "simulate",
    "sn_fit_mle",
    "sn_fit_mom",
    "sn_mode",
    "sn_nll",
    "sn_p_value",
    "sn_pdf",
    "validate_distribution",
]
