#!/usr/bin/env python3
# Copyright 2026 The herbclf Authors
# SPDX-License-Identifier: Apache-2.0
"""Export torchvision backbones as TorchScript archives for herbclf.

Each archive is written to <out>/<arch>.pt and carries a herbclf.json extra
file recording the architecture and where the weights came from.
"""

import argparse
import json
import pathlib
import sys

import torch
import torchvision

ARCHS = ["resnet34", "densenet121", "vgg11_bn", "convnext_base", "swin_t"]


def build(arch, random_init, state_dict, seed):
    ctor = getattr(torchvision.models, arch)
    if random_init:
        torch.manual_seed(seed)
        return ctor(weights=None), "random-init", "seed-%d" % seed
    if state_dict:
        model = ctor(weights=None)
        model.load_state_dict(torch.load(state_dict, map_location="cpu"))
        return model, "published", pathlib.Path(state_dict).name
    weights = torchvision.models.get_model_weights(arch).IMAGENET1K_V1
    return ctor(weights=weights), "published", str(weights)


def main(argv):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--arch", required=True, help="one of %s, or 'all'" % ", ".join(ARCHS))
    parser.add_argument("--out", required=True, type=pathlib.Path, help="weight cache directory")
    parser.add_argument("--random-init", action="store_true", help="seeded random weights, for testing only")
    parser.add_argument("--state-dict", help="manually downloaded upstream checkpoint (.pth)")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--force", action="store_true", help="overwrite existing archives")
    args = parser.parse_args(argv)

    archs = ARCHS if args.arch == "all" else [args.arch]
    for arch in archs:
        if arch not in ARCHS:
            parser.error("unknown architecture %r" % arch)
    if args.state_dict and len(archs) != 1:
        parser.error("--state-dict needs a single --arch")

    args.out.mkdir(parents=True, exist_ok=True)
    for arch in archs:
        target = args.out / ("%s.pt" % arch)
        if target.exists() and not args.force:
            print("%s exists, skipping" % target)
            continue
        model, source, weights_id = build(arch, args.random_init, args.state_dict, args.seed)
        model.eval()
        scripted = torch.jit.script(model)
        meta = json.dumps({"architecture": arch, "source": source, "weights": weights_id})
        tmp = target.with_suffix(".pt.partial")
        torch.jit.save(scripted, str(tmp), _extra_files={"herbclf.json": meta})
        tmp.replace(target)
        print("wrote %s (%s)" % (target, source))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
