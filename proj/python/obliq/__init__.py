# Copyright 2026 The obliq Authors
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

"""Python front end for the obliq simulator."""

from ._obliq import (
    Program,
    ProgramRound,
    compile_parity,
    concat_programs,
    evolve,
    expected_tgdmqc_ledger,
    expected_toqc_ledger,
    ideal_outcome_distribution,
    ideal_output,
    parity,
    program_product,
    run_tgdmqc,
    run_toqc,
    run_toy,
    tgdmqc_distribution,
    total_variation,
    trace_distance,
)

__all__ = [
    "Program",
    "ProgramRound",
    "compile_parity",
    "concat_programs",
    "evolve",
    "expected_tgdmqc_ledger",
    "expected_toqc_ledger",
    "ideal_outcome_distribution",
    "ideal_output",
    "parity",
    "program_product",
    "run_tgdmqc",
    "run_toqc",
    "run_toy",
    "tgdmqc_distribution",
    "total_variation",
    "trace_distance",
]
