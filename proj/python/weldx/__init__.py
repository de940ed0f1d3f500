# Copyright 2026 The Weldx Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Weld radiograph classification, explanation and audit toolkit."""

from weldx._weldx import (
    __version__,
    aggregate,
    balanced_train_counts,
    cli,
    early_stopping,
    explain_masks,
    grad_cam,
    pooled_recall,
    recall,
    run_study,
    synthesize_corpus,
)

__all__ = [
    "__version__",
    "aggregate",
    "balanced_train_counts",
    "cli",
    "early_stopping",
    "explain_masks",
    "grad_cam",
    "pooled_recall",
    "recall",
    "run_study",
    "synthesize_corpus",
]
