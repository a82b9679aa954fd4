# Copyright 2026 The roofseg Authors.
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

"""Roof plane instance segmentation."""

from ._roofseg import (
    FAMILIES,
    RoofsegError,
    classification_loss,
    cluster,
    derive_labels,
    embedding_loss,
    evaluate,
    generate_building,
    offset_loss,
    oracle_predictions,
    ransac,
    region_grow,
    segment,
)

__all__ = [
    "FAMILIES",
    "RoofsegError",
    "classification_loss",
    "cluster",
    "derive_labels",
    "embedding_loss",
    "evaluate",
    "generate_building",
    "offset_loss",
    "oracle_predictions",
    "ransac",
    "region_grow",
    "segment",
]
