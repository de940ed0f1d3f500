#!/usr/bin/env python3
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
"""Reference forward passes of randomly initialized torchvision backbones.

For every architecture writes `<arch>.pt` (weights, 4-class head) and
`<arch>_io.pt` ({"input", "logits"} in inference mode).
"""

import pathlib
import sys

import torch

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[2] / "tools"))
import convert_torchvision_weights as cw  # pylint: disable=g-import-not-at-top


def main(out):
  out = pathlib.Path(out)
  out.mkdir(parents=True, exist_ok=True)
  for i, arch in enumerate(cw.ARCHITECTURES):
    torch.manual_seed(100 + i)
    model = cw.build(arch, pretrained=False, num_classes=4).eval()
    # Non-trivial running statistics so inference-mode batch norm is tested.
    with torch.no_grad():
      for m in model.modules():
        if isinstance(m, torch.nn.BatchNorm2d):
          m.running_mean.uniform_(-0.1, 0.1)
          m.running_var.uniform_(0.5, 1.5)
    x = torch.randn(2, 3, 64, 64)
    with torch.no_grad():
      logits = model(x)
    torch.save(cw.plain_state_dict(model), out / f"{arch}.pt")
    torch.save({"input": x, "logits": logits}, out / f"{arch}_io.pt")
  return 0


if __name__ == "__main__":
  sys.exit(main(sys.argv[1]))
