#!/usr/bin/env python3
"""Smoke test for the cmspy extension module.

Builds nothing itself: expects `cargo build -p cms-py` (or --release) to
have produced the cdylib, stages it under an importable name, and runs a
quick pass over every exposed surface.
"""

import json
import pathlib
import shutil
import sys
import sysconfig
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def stage_module() -> None:
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    candidates = [
        ROOT / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libcmspy.so", "libcmspy.dylib", "cmspy.dll")
    ]
    built = next((c for c in candidates if c.exists()), None)
    if built is None:
        sys.exit("build the extension first: cargo build -p cms-py")
    staging = pathlib.Path(tempfile.mkdtemp(prefix="cmspy-"))
    shutil.copy2(built, staging / f"cmspy{suffix}")
    sys.path.insert(0, str(staging))


stage_module()

import cmspy  # noqa: E402

failures = []


def check(name, condition):
    status = "ok" if condition else "FAIL"
    print(f"  {name}: {status}")
    if not condition:
        failures.append(name)


print("structures")
x = cmspy.Structure.from_json(
    '{"points":["p","q"],"metric":[["0","1"],["1","0"]],'
    '"relations":{"R":{"arity":1,"tuples":[[0]]}}}'
)
check("json roundtrip", json.loads(x.to_json())["points"] == ["p", "q"])
check("product metric", x.product_metric([0, 0], [0, 1]) == "1")
check("covering radius", x.covering_radius([0]) == "1")
doubled = x.scale("2")
check("scaling", doubled.dist(0, 1) == "2")

print("isometry")
check("self witness", cmspy.decide_isometric_iso(x, x) == [0, 1])
relabeled = x.relabel([1, 0])
check(
    "routes agree",
    cmspy.decide_isometric_iso(x, relabeled)
    == cmspy.brute_force_isometric_iso(x, relabeled),
)
check("scaled not isometric", cmspy.decide_isometric_iso(x, doubled) is None)
sig = json.loads(cmspy.signature_json(x))
check("signature entries", sig["n"] == 2 and len(sig["entries"]) == 2)
czeta = cmspy.compute_c_zeta(x, '{"n":1}')
check("c_zeta singletons", czeta == [[["0"]]])

print("bi-Lipschitz")
check("distortion of scaling", cmspy.optimal_distortion(x, doubled) == "2")
check("self dominance", cmspy.dominates(x, x, "1"))
check("scaled dominance", cmspy.dominates(x, doubled, "2"))
check("tight failure", not cmspy.dominates(x, doubled, "3/2"))

print("groups")
z5 = cmspy.Group.cyclic(5)
check("word metric", z5.word_metric([1], ["1"]) == ["0", "1", "2", "2", "1"])
roelcke = z5.roelcke_structure([1], ["1"])
check("roelcke structure", len(roelcke) == 5)
check("translation witness", z5.translation_equiv(1, 2, [0, 1], [2, 3]) == 2)
check("translation none", z5.translation_equiv(1, 2, [0, 1], [0, 2]) is None)
d4 = cmspy.Group.dihedral(4)
q8 = cmspy.Group.quaternion8()
check("group iso oracle", d4.isomorphic_to(q8) is None)

print("heaps")
heap = cmspy.Heap.from_group(z5)
check("heap op", heap.op(1, 3, 2) == 0)
back = heap.to_group(0)
check("heap roundtrip", back.to_json() == z5.to_json())
check("base change", heap.base_change(0, 2) == [2, 3, 4, 0, 1])
check("subheap count", len(heap.subheaps()) == 6)
a, beta = heap.decompose_iso(heap, [2, 3, 4, 0, 1], 0, 0)
check("decomposition", a == 2 and beta == [0, 1, 2, 3, 4])

print("stone duality")
algebra = cmspy.stone_encode(x)
decoded = cmspy.stone_decode(algebra)
check(
    "stone roundtrip",
    cmspy.brute_force_isometric_iso(
        cmspy.Structure.discrete(2).with_relation("R", 1, [[0]]), decoded
    )
    is not None,
)
check("algebra self iso", cmspy.boolean_iso(algebra, algebra) is not None)

print("embeddings")
image = cmspy.kuratowski_embed(x, 3)
check("kuratowski", image == [["0", "1", "0"], ["1", "0", "1"]])
check("cube metric", cmspy.cube_metric(["0", "1"], ["1", "0"]) == "3/4")
check("iota", cmspy.iota(["0", "1", "1/2"]) == ["1/4", "3/4", "1/2"])

print("corpus")
generated = json.loads(cmspy.random_structure_json(7, 4, [("R", 2)], 0.3))
check("random structure parses", 1 <= len(generated["points"]) <= 4)

if failures:
    sys.exit(f"{len(failures)} check(s) failed: {', '.join(failures)}")
print("all checks passed")
