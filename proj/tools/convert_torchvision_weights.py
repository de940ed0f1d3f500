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
"""Writes torchvision backbone weights as plain {name: tensor} files.

The C++ loader reads `<out>/<arch>.pt`. Pretrained weights come from the
torchvision cache (or are downloaded when the machine has network access);
`--state-dict` converts an existing state-dict file instead.

  convert_torchvision_weights.py --out weights/ resnet18 densenet121
  convert_torchvision_weights.py --out weights/ --state-dict r18.pth resnet18
"""

import argparse
import pathlib
import sys

import torch
import torchvision

ARCHITECTURES = (
    "resnet18",
    "densenet121",
    "efficientnet_b0",
    "efficientnet_v2_s",
    "mobilenet_v2",
    "wide_resnet50_2",
    "shufflenet_v2_x0_5",
    "squeezenet1_0",
)


def plain_state_dict(model_or_state):
  state = model_or_state
  if isinstance(model_or_state, torch.nn.Module):
    state = model_or_state.state_dict()
  return {k: v.detach().cpu().contiguous() for k, v in state.items()}


def build(arch, pretrained, num_classes=1000):
  if pretrained:
    return torchvision.models.get_model(arch, weights="DEFAULT")
  return torchvision.models.get_model(arch, weights=None, num_classes=num_classes)


def main(argv):
  parser = argparse.ArgumentParser(description=__doc__,
                                   formatter_class=argparse.RawDescriptionHelpFormatter)
  parser.add_argument("archs", nargs="+", choices=ARCHITECTURES)
  parser.add_argument("--out", required=True, type=pathlib.Path)
  parser.add_argument("--state-dict", type=pathlib.Path,
                      help="convert this state-dict file (single arch only)")
  args = parser.parse_args(argv)
  if args.state_dict and len(args.archs) != 1:
    parser.error("--state-dict takes exactly one architecture")
  args.out.mkdir(parents=True, exist_ok=True)
  for arch in args.archs:
    if args.state_dict:
      state = torch.load(args.state_dict, map_location="cpu", weights_only=True)
    else:
      state = build(arch, pretrained=True)
    target = args.out / f"{arch}.pt"
    torch.save(plain_state_dict(state), target)
    print(f"wrote {target}")
  return 0


if __name__ == "__main__":
  sys.exit(main(sys.argv[1:]))
