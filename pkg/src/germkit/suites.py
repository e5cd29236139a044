"""Property suites and deterministic reports.

Each suite turns one verified claim into an executable check over random
cases or exhaustive word balls.  A suite returns a :class:`Report`; reports
serialize to canonical JSON that is byte-identical across runs with the same
configuration and seed (wall-clock timings are carried on the object but
excluded from the canonical form).  Every counterexample payload contains
enough serialized state for :func:`replay` to reproduce the failure in
isolation.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable

from . import serialize
from .action import (
    Homeo,
    Word,
    apply_homeo,
    induced_germ,
    invert_homeo,
    moved_point_witness,
    overlap_ray,
    reduced_words,
    word_germ,
    word_homeo,
)
from .blowup import (
    BlownPoint,
    BlowupSpace,
    StabilizerData,
    alpha_apply,
    blown_induced_germ,
    injectivity_certificate,
    positive_ray_orbit_search,
    stabilizer_check,
    validate_alpha_action,
)
from .examples import Bundle, bundle
from .fuzz import CaseGen
from .germ import Germ, OrderSign, compare, eventual_comparison_bound
from .leafspace import LeafSpace, Point, root_embedding
from .rationals import format_rational, parse_rational


class SuiteError(ValueError):
    """Unknown suite or unusable configuration."""


@dataclass(frozen=True)
class SuiteConfig:
    """Knobs shared by all suites; identical config and seed means an
    identical canonical report."""

    seed: int = 0
    cases: int = 500
    word_ball: int = 4
    stabilizer_ball: int = 5
    max_word_length: int = 8
    plain_samples: int = 100
    interval_samples: int = 20
    examples: tuple[str, ...] = ("e1", "e2", "e3")
    leafspace_path: str | None = None
    action_path: str | None = None
    blowup_path: str | None = None
    auto_extend: int = 0

    def to_data(self) -> dict:
        return {
            "seed": self.seed,
            "cases": self.cases,
            "word_ball": self.word_ball,
            "stabilizer_ball": self.stabilizer_ball,
            "max_word_length": self.max_word_length,
            "plain_samples": self.plain_samples,
            "interval_samples": self.interval_samples,
            "examples": list(self.examples),
            "leafspace_path": self.leafspace_path,
            "action_path": self.action_path,
            "blowup_path": self.blowup_path,
            "auto_extend": self.auto_extend,
        }


@dataclass
class Report:
    suite: str
    claim: str
    passed: bool
    cases: int
    counterexample: dict | None
    config: SuiteConfig
    elapsed: float = 0.0

    def to_data(self, include_timings: bool = False) -> dict:
        data = {
            "suite": self.suite,
            "claim": self.claim,
            "passed": self.passed,
            "cases": self.cases,
            "counterexample": self.counterexample,
            "config": self.config.to_data(),
        }
        if include_timings:
            data["elapsed_seconds"] = self.elapsed
        return data

    def canonical_json(self) -> str:
        """Deterministic serialization: no timings, fixed key order."""
        return json.dumps(self.to_data(include_timings=False), indent=2) + "\n"


# ---------------------------------------------------------------------------
# Targets: bundled examples or user files


@dataclass(frozen=True)
class Target:
    label: str
    space: LeafSpace
    generators: dict[str, Homeo]
    marked: Point | None = None
    stabilizer: StabilizerData | None = None
    depth: int = 0
    ball: int = 0

    @property
    def has_blowup(self) -> bool:
        return self.marked is not None and self.stabilizer is not None


def _target_from_bundle(b: Bundle) -> Target:
    return Target(
        b.name, b.space, b.generators, b.marked, b.stabilizer, b.depth, b.ball
    )


def resolve_targets(config: SuiteConfig, need_blowup: bool = False) -> list[Target]:
    """The actions a suite runs against: user files when given, else bundles."""
    if config.leafspace_path or config.action_path:
        if not (config.leafspace_path and config.action_path):
            raise SuiteError("file targets need both a leaf-space and an action file")
        with open(config.leafspace_path) as fh:
            space = serialize.parse_leafspace(fh.read())
        with open(config.action_path) as fh:
            generators = serialize.parse_action(fh.read())
        if config.auto_extend:
            from .action import extend_space_for_action

            space = extend_space_for_action(space, generators, config.auto_extend)
        marked = stab = None
        depth = ball = 0
        if config.blowup_path:
            with open(config.blowup_path) as fh:
                marked, stab, depth, ball = serialize.parse_blowup_spec(fh.read())
        target = Target("file", space, generators, marked, stab, depth, ball)
        if need_blowup and not target.has_blowup:
            raise SuiteError("this suite needs a blow-up spec file")
        return [target]
    targets = [_target_from_bundle(bundle(name)) for name in config.examples]
    if need_blowup:
        targets = [t for t in targets if t.has_blowup]
        if not targets:
            raise SuiteError("no target with blow-up data")
    return targets


def _load_target_payload(payload: dict, config: SuiteConfig) -> Target:
    label = payload["target"]
    if label == "file":
        return resolve_targets(config)[0]
    return _target_from_bundle(bundle(label))


# ---------------------------------------------------------------------------
# Germ-level suites


def _suite_germ_group(config: SuiteConfig) -> Report:
    gen = CaseGen(config.seed)
    maps = [gen.plmap() for _ in range(max(3, config.cases))]
    counterexample = None
    checked = 0
    for i in range(len(maps) - 2):
        f, g, h = maps[i], maps[i + 1], maps[i + 2]
        gf, gg, gh = Germ.of(f), Germ.of(g), Germ.of(h)
        ok = (
            (gf * gg) * gh == gf * (gg * gh)
            and gf * Germ.identity() == gf
            and Germ.identity() * gf == gf
            and gf * ~gf == Germ.identity()
            and ~gf * gf == Germ.identity()
            and Germ.of(f * g) == gf * gg
        )
        checked += 1
        if not ok:
            counterexample = {
                "case": i,
                "maps": [serialize.plmap_to_data(m) for m in (f, g, h)],
            }
            break
    return Report(
        "germ-group-axioms",
        "tail germs form a group under composition of representatives",
        counterexample is None,
        checked,
        counterexample,
        config,
    )


def _replay_germ_group(config: SuiteConfig, payload: dict) -> bool:
    f, g, h = (serialize.plmap_from_data(d) for d in payload["maps"])
    gf, gg, gh = Germ.of(f), Germ.of(g), Germ.of(h)
    return not (
        (gf * gg) * gh == gf * (gg * gh)
        and gf * ~gf == Germ.identity()
        and Germ.of(f * g) == gf * gg
    )


def _suite_germ_quotient(config: SuiteConfig) -> Report:
    gen = CaseGen(config.seed)
    counterexample = None
    checked = 0
    for i in range(config.cases):
        f, g = gen.plmap(), gen.plmap()
        cut_f = gen.fraction()
        cut_g = gen.fraction()
        f2 = gen.mutate_below(f, cut_f)
        g2 = gen.mutate_below(g, cut_g)
        checked += 1
        expected = Germ.of(f * g)
        if Germ.of(f2) * Germ.of(g2) != expected or Germ.of(f2 * g2) != expected:
            counterexample = {
                "case": i,
                "maps": [serialize.plmap_to_data(m) for m in (f, g, f2, g2)],
            }
            break
    return Report(
        "germ-quotient",
        "the product germ ignores changes to representatives below any cutoff",
        counterexample is None,
        checked,
        counterexample,
        config,
    )


def _replay_germ_quotient(config: SuiteConfig, payload: dict) -> bool:
    f, g, f2, g2 = (serialize.plmap_from_data(d) for d in payload["maps"])
    expected = Germ.of(f * g)
    return Germ.of(f2) * Germ.of(g2) != expected


def _cone_oracle(u: Germ) -> bool:
    """Eventual comparison against the diagonal, far beyond the crossing."""
    f = u.representative()
    base = eventual_comparison_bound(u)
    return f(base + 1) > base + 1 and f(base + 1000) > base + 1000


def _suite_order_laws(config: SuiteConfig) -> Report:
    gen = CaseGen(config.seed)
    counterexample = None
    checked = 0
    for i in range(config.cases):
        u, v, w = gen.germ(), gen.germ(), gen.germ()
        checked += 1
        signs = {compare(u, v), compare(v, u)}
        trichotomy = (
            (compare(u, v) is OrderSign.EQ) == (u == v)
            and (signs in ({OrderSign.EQ}, {OrderSign.LT, OrderSign.GT}))
        )
        le = lambda a, b: compare(a, b) in (OrderSign.LT, OrderSign.EQ)
        lo, mid, hi = sorted((u, v, w), key=lambda g: (g.slope, g.offset))
        transitivity = not (le(lo, mid) and le(mid, hi)) or le(lo, hi)
        invariance = compare(u, v) == compare(w * u, w * v)
        cone = (compare(u, Germ.identity()) is OrderSign.GT) == _cone_oracle(u)
        if not (trichotomy and transitivity and invariance and cone):
            counterexample = {
                "case": i,
                "germs": [serialize.germ_to_data(x) for x in (u, v, w)],
            }
            break
    return Report(
        "order-laws",
        "eventual dominance is a total, transitive, left-invariant order on germs",
        counterexample is None,
        checked,
        counterexample,
        config,
    )


def _replay_order_laws(config: SuiteConfig, payload: dict) -> bool:
    u, v, w = (serialize.germ_from_data(d) for d in payload["germs"])
    return not (
        compare(u, v) == compare(w * u, w * v)
        and (compare(u, Germ.identity()) is OrderSign.GT) == _cone_oracle(u)
    )


# ---------------------------------------------------------------------------
# Action-level suites


def _sample_homeos(target: Target, gen: CaseGen, count: int) -> list[tuple[str, Homeo]]:
    """Generator homeos plus seeded random ones on the target's space."""
    out: list[tuple[str, Homeo]] = []
    for name in sorted(target.generators):
        out.append((name, target.generators[name]))
        out.append((f"{name}^-1", invert_homeo(target.space, target.generators[name])))
    while len(out) < count:
        out.append((f"random[{len(out)}]", gen.homeo(target.space)))
    return out


def _homeo_payload(target: Target, label: str, h: Homeo) -> dict:
    return {
        "target": target.label,
        "homeo": label,
        "branch_map": dict(h.branch_map),
        "branch_pl": {b: serialize.plmap_to_data(pl) for b, pl in h.branch_pl.items()},
    }


def _homeo_from_payload(payload: dict) -> Homeo:
    return Homeo(
        payload["branch_map"],
        {b: serialize.plmap_from_data(d) for b, d in payload["branch_pl"].items()},
        name=payload.get("homeo", ""),
    )


def _overlap_sound(space: LeafSpace, h: Homeo) -> bool:
    e = root_embedding(space)
    t = overlap_ray(space, h, e)

    def on_line(x: Fraction) -> bool:
        return e.contains(space, apply_homeo(space, h, e.point_at(space, x)))

    base = Fraction(0) if t is None else t
    if not all(on_line(base + d) for d in (Fraction(1, 3), 1, 17)):
        return False
    if t is not None:
        probes = [t, t - Fraction(1, 1000), t - Fraction(1, 2), t - 1]
        if all(on_line(x) for x in probes):
            return False  # the threshold was not minimal
    return True


def _suite_overlap(config: SuiteConfig) -> Report:
    counterexample = None
    checked = 0
    for target in resolve_targets(config):
        gen = CaseGen(config.seed)
        for label, h in _sample_homeos(target, gen, max(8, config.cases // 10)):
            checked += 1
            if not _overlap_sound(target.space, h):
                counterexample = _homeo_payload(target, label, h)
                break
        if counterexample:
            break
    if counterexample is None and not config.leafspace_path:
        # line swaps: the finite-threshold case on fresh random spaces
        gen = CaseGen(config.seed)
        for i in range(max(4, config.cases // 25)):
            space, swap, departure = gen.swap_pair()
            checked += 1
            e = root_embedding(space)
            if not (
                _overlap_sound(space, swap)
                and overlap_ray(space, swap, e) == departure
                and induced_germ(space, swap, e).is_identity()
            ):
                counterexample = {"target": "swap", "index": i}
                break
    return Report(
        "overlap-rays",
        "beyond a least threshold the image of the upper ray lies back on the line",
        counterexample is None,
        checked,
        counterexample,
        config,
    )


def _replay_overlap(config: SuiteConfig, payload: dict) -> bool:
    if payload.get("target") == "swap":
        gen = CaseGen(config.seed)
        for _ in range(payload["index"]):
            gen.swap_pair()
        space, swap, departure = gen.swap_pair()
        return not (
            _overlap_sound(space, swap)
            and overlap_ray(space, swap, root_embedding(space)) == departure
        )
    target = _load_target_payload(payload, config)
    h = _homeo_from_payload(payload)
    return not _overlap_sound(target.space, h)


def _suite_threshold_independence(config: SuiteConfig) -> Report:
    counterexample = None
    checked = 0
    per_target = max(1, config.cases // 2)
    for target in resolve_targets(config):
        gen = CaseGen(config.seed)
        e = root_embedding(target.space)
        for label, h in _sample_homeos(target, gen, per_target):
            checked += 1
            t = overlap_ray(target.space, h, e)
            base = Fraction(0) if t is None else t
            low = induced_germ(target.space, h, e, threshold=base)
            high = induced_germ(target.space, h, e, threshold=base + 10)
            default = induced_germ(target.space, h, e)
            if not (low == high == default):
                counterexample = _homeo_payload(target, label, h)
                break
        if counterexample:
            break
    return Report(
        "d-threshold-independence",
        "the induced germ is the same whatever admissible threshold computes it",
        counterexample is None,
        checked,
        counterexample,
        config,
    )


def _replay_threshold_independence(config: SuiteConfig, payload: dict) -> bool:
    target = _load_target_payload(payload, config)
    h = _homeo_from_payload(payload)
    e = root_embedding(target.space)
    t = overlap_ray(target.space, h, e)
    base = Fraction(0) if t is None else t
    return induced_germ(target.space, h, e, threshold=base) != induced_germ(
        target.space, h, e, threshold=base + 10
    )


def _suite_homomorphism(config: SuiteConfig) -> Report:
    counterexample = None
    checked = 0
    targets = resolve_targets(config)
    per_target = max(1, config.cases // max(1, len(targets)))
    for target in targets:
        if not target.generators:
            continue
        gen = CaseGen(config.seed)
        e = root_embedding(target.space)
        names = sorted(target.generators)
        for i in range(per_target):
            w1 = gen.word(names, config.max_word_length)
            w2 = gen.word(names, config.max_word_length)
            checked += 1
            product = word_germ(target.space, target.generators, w1 * w2, e)
            split = word_germ(target.space, target.generators, w1, e) * word_germ(
                target.space, target.generators, w2, e
            )
            inverse_ok = word_germ(target.space, target.generators, ~w1, e) == ~word_germ(
                target.space, target.generators, w1, e
            )
            if product != split or not inverse_ok:
                counterexample = {
                    "target": target.label,
                    "case": i,
                    "words": [str(w1), str(w2)],
                }
                break
        if counterexample:
            break
    return Report(
        "d-homomorphism",
        "the induced germ of a concatenated word is the product of the parts' germs",
        counterexample is None,
        checked,
        counterexample,
        config,
    )


def _replay_homomorphism(config: SuiteConfig, payload: dict) -> bool:
    target = _load_target_payload(payload, config)
    e = root_embedding(target.space)
    w1, w2 = (Word.parse(t) for t in payload["words"])
    product = word_germ(target.space, target.generators, w1 * w2, e)
    split = word_germ(target.space, target.generators, w1, e) * word_germ(
        target.space, target.generators, w2, e
    )
    return product != split


_WITNESS_CUTS = (Fraction(0), Fraction(10**3), Fraction(10**6))


def _suite_nontriviality(config: SuiteConfig) -> Report:
    counterexample = None
    checked = 0
    for target in resolve_targets(config):
        gen = CaseGen(config.seed)
        e = root_embedding(target.space)
        for label, h in _sample_homeos(target, gen, max(8, config.cases // 10)):
            checked += 1
            witnesses = [moved_point_witness(target.space, h, e, n) for n in _WITNESS_CUTS]
            if all(w is not None for w in witnesses):
                if induced_germ(target.space, h, e).is_identity():
                    counterexample = _homeo_payload(target, label, h)
                    break
            for n, m in zip(_WITNESS_CUTS, witnesses):
                if m is not None and not (
                    m > n
                    and apply_homeo(target.space, h, e.point_at(target.space, m))
                    != e.point_at(target.space, m)
                ):
                    counterexample = _homeo_payload(target, label, h)
                    break
            if counterexample:
                break
        if counterexample:
            break
    return Report(
        "d-nontriviality",
        "moving arbitrarily high line points forces a nontrivial induced germ",
        counterexample is None,
        checked,
        counterexample,
        config,
    )


def _replay_nontriviality(config: SuiteConfig, payload: dict) -> bool:
    target = _load_target_payload(payload, config)
    h = _homeo_from_payload(payload)
    e = root_embedding(target.space)
    witnesses = [moved_point_witness(target.space, h, e, n) for n in _WITNESS_CUTS]
    return all(w is not None for w in witnesses) and induced_germ(
        target.space, h, e
    ).is_identity()


# ---------------------------------------------------------------------------
# Blow-up suites


def build_blowup_target(target: Target) -> tuple[BlowupSpace, StabilizerData]:
    if not target.has_blowup:
        raise SuiteError(f"target {target.label!r} carries no blow-up data")
    space = BlowupSpace(target.space, target.generators, target.marked, target.depth)
    return space, target.stabilizer


def _plain_samples(space: BlowupSpace, ball: int, want: int) -> list[BlownPoint]:
    """Plain points that stay plain under every word of the ball.

    Candidates are spread along every branch below its departure and along
    the root ray; any candidate whose ball-image meets the blown orbit is
    discarded, so the action-law check never escapes the expanded orbit.
    """
    base = space.base
    words = reduced_words(sorted(space.generators), ball)
    homeos = [space.word_homeo(w) for w in words]
    candidates: list[Point] = []
    offsets = [Fraction(n, 7) for n in range(1, 4 * want, 2)]
    top = max(
        (dep for b in base.branches if (dep := base.departure(b)) is not None),
        default=Fraction(0),
    )
    for off in offsets:
        candidates.append(Point(base.root, top + off))
        for name in sorted(base.branches):
            dep = base.departure(name)
            anchor = dep if dep is not None else Fraction(0)
            candidates.append(Point(name, anchor - off))
    out: list[BlownPoint] = []
    seen: set[Point] = set()
    for cand in candidates:
        point = base.canonical(cand)
        if point in seen or point in space.orbit:
            continue
        seen.add(point)
        if any(apply_homeo(base, h, point) in space.orbit for h in homeos):
            continue
        out.append(BlownPoint(point))
        if len(out) >= want:
            break
    return out


def _interval_samples(space: BlowupSpace, ball: int, want: int) -> list[BlownPoint]:
    """Interval points shallow enough that ball words cannot escape."""
    budget = max(0, space.depth - ball)
    points = sorted(
        (p for p, w in space.orbit.items() if len(w) <= budget),
        key=lambda p: (p.branch, p.coord),
    )
    # interior heights first: the endpoints are fixed by every twist
    heights = [
        Fraction(1, 2),
        Fraction(1, 4),
        Fraction(3, 4),
        Fraction(1, 3),
        Fraction(2, 3),
        Fraction(1, 5),
        Fraction(4, 5),
        Fraction(0),
        Fraction(1),
    ]
    out: list[BlownPoint] = []
    for h in heights:
        for p in points:
            out.append(BlownPoint(p, h))
            if len(out) >= want:
                return out
    return out


def _blown_point_payload(q: BlownPoint) -> dict:
    return {
        "point": serialize.point_to_data(q.point),
        "height": None if q.height is None else format_rational(q.height),
    }


def _blown_point_from_payload(data: dict) -> BlownPoint:
    height = data.get("height")
    return BlownPoint(
        serialize.point_from_data(data["point"]),
        None if height is None else parse_rational(height),
    )


def _action_law_samples(space: BlowupSpace, config: SuiteConfig) -> list[BlownPoint]:
    return _plain_samples(space, config.word_ball, config.plain_samples) + _interval_samples(
        space, config.word_ball, config.interval_samples
    )


def _suite_action_law(config: SuiteConfig) -> Report:
    counterexample = None
    checked = 0
    targets = resolve_targets(config, need_blowup=True)
    for target in targets:
        space, stab = build_blowup_target(target)
        samples = _action_law_samples(space, config)
        checked += len(samples)
        violation = validate_alpha_action(space, stab, samples, config.word_ball)
        if violation is not None:
            counterexample = {
                "target": target.label,
                "outer": str(violation.outer),
                "inner": str(violation.inner),
                "sample": _blown_point_payload(violation.sample),
            }
            break
    fault_caught = True
    if counterexample is None and not config.leafspace_path:
        faulty = _target_from_bundle(bundle("e3-coset-fault"))
        space, stab = build_blowup_target(faulty)
        samples = _interval_samples(space, config.word_ball, config.interval_samples)
        fault_caught = validate_alpha_action(space, stab, samples, config.word_ball) is not None
        if not fault_caught:
            counterexample = {
                "target": faulty.label,
                "expected": "an action-law violation from the corrupted coset table",
            }
    return Report(
        "alpha-action-law",
        "the twisted action is an action: composite words act as composed maps",
        counterexample is None and fault_caught,
        checked,
        counterexample,
        config,
    )


def _replay_action_law(config: SuiteConfig, payload: dict) -> bool:
    target = _load_target_payload(payload, config)
    space, stab = build_blowup_target(target)
    outer, inner = Word.parse(payload["outer"]), Word.parse(payload["inner"])
    q = _blown_point_from_payload(payload["sample"])
    stepwise = alpha_apply(space, stab, outer, alpha_apply(space, stab, inner, q))
    combined = alpha_apply(space, stab, outer * inner, q)
    return combined != stepwise


def _suite_stabilizer(config: SuiteConfig) -> Report:
    counterexample = None
    checked = 0
    for target in resolve_targets(config, need_blowup=True):
        space, stab = build_blowup_target(target)
        ball = min(config.stabilizer_ball, target.ball or config.stabilizer_ball)
        checked += 1
        fixing = stabilizer_check(space, stab, ball)
        if fixing is not None:
            counterexample = {"target": target.label, "fixing_word": str(fixing)}
            break
        problem = stab.validate_phi(config.stabilizer_ball)
        if problem is not None:
            counterexample = {"target": target.label, "problem": problem}
            break
    fault_caught = True
    if counterexample is None and not config.leafspace_path:
        faulty = _target_from_bundle(bundle("e3-phi-fault"))
        space, stab = build_blowup_target(faulty)
        fixing = stabilizer_check(space, stab, min(config.stabilizer_ball, faulty.ball))
        fault_caught = fixing is not None and str(fixing) == "k"
        if not fault_caught:
            counterexample = {
                "target": faulty.label,
                "expected": "fixing word 'k' from the height-fixing realization",
                "got": None if fixing is None else str(fixing),
            }
    return Report(
        "trivial-stabilizer",
        "no nontrivial ball word fixes the marked interval midpoint",
        counterexample is None and fault_caught,
        checked,
        counterexample,
        config,
    )


def _replay_stabilizer(config: SuiteConfig, payload: dict) -> bool:
    target = _load_target_payload(payload, config)
    space, stab = build_blowup_target(target)
    if "fixing_word" not in payload:
        return stab.validate_phi(config.stabilizer_ball) is not None
    w = Word.parse(payload["fixing_word"])
    half = Fraction(1, 2)
    midpoint = space.midpoint()
    return alpha_apply(space, stab, w, midpoint) == midpoint


def _suite_orbit_limit(config: SuiteConfig) -> Report:
    counterexample = None
    checked = 0
    for target in resolve_targets(config, need_blowup=True):
        space, stab = build_blowup_target(target)
        e = root_embedding(target.space)
        ball = min(target.ball or config.word_ball, space.depth)
        cuts = [Fraction(-10**6), Fraction(0), Fraction(5)]
        for n in cuts:
            checked += 1
            found = positive_ray_orbit_search(space, stab, e, n, ball)
            if found is None:
                continue  # exhaustion is a permitted outcome, not a refutation
            image = alpha_apply(space, stab, found, space.midpoint())
            if not (e.contains(target.space, image.point) and image.point.coord > n):
                counterexample = {
                    "target": target.label,
                    "cut": format_rational(n),
                    "word": str(found),
                }
                break
        if counterexample:
            break
    return Report(
        "orbit-limit",
        "an orbit word found over a requested upper ray really lands there",
        counterexample is None,
        checked,
        counterexample,
        config,
    )


def _replay_orbit_limit(config: SuiteConfig, payload: dict) -> bool:
    target = _load_target_payload(payload, config)
    space, stab = build_blowup_target(target)
    e = root_embedding(target.space)
    n = parse_rational(payload["cut"])
    image = alpha_apply(space, stab, Word.parse(payload["word"]), space.midpoint())
    return not (e.contains(target.space, image.point) and image.point.coord > n)


def _suite_injectivity(config: SuiteConfig) -> Report:
    counterexample = None
    checked = 0
    for target in resolve_targets(config, need_blowup=True):
        space, stab = build_blowup_target(target)
        e = root_embedding(target.space)
        ball = config.stabilizer_ball
        checked += sum(1 for w in reduced_words(sorted(space.generators), ball) if len(w))
        failing = injectivity_certificate(space, stab, e, ball)
        if failing is not None:
            counterexample = {"target": target.label, "word": str(failing)}
            break
    return Report(
        "injectivity-certificate",
        "every nontrivial ball word keeps a nontrivial germ through the blown chart",
        counterexample is None,
        checked,
        counterexample,
        config,
    )


def _replay_injectivity(config: SuiteConfig, payload: dict) -> bool:
    target = _load_target_payload(payload, config)
    space, stab = build_blowup_target(target)
    e = root_embedding(target.space)
    return blown_induced_germ(space, stab, Word.parse(payload["word"]), e).is_identity()


# ---------------------------------------------------------------------------
# Structural suite


def _suite_structural(config: SuiteConfig) -> Report:
    gen = CaseGen(config.seed)
    counterexample = None
    checked = 0
    count = min(config.cases, 100)
    for i in range(count):
        space = gen.leafspace()
        marked = space.canonical(gen.interior_point(space))
        blown = BlowupSpace(space, {}, marked, depth=2)
        checked += 1
        if blown.classify() is not space.classify():
            counterexample = {
                "case": i,
                "kind": "classification",
                "leafspace": serialize.leafspace_to_data(space),
            }
            break
        text = serialize.emit_leafspace(space)
        if serialize.emit_leafspace(serialize.parse_leafspace(text)) != text:
            counterexample = {
                "case": i,
                "kind": "roundtrip",
                "leafspace": serialize.leafspace_to_data(space),
            }
            break
    if counterexample is None:
        for name in config.examples:
            b = bundle(name)
            text = serialize.emit_action(b.generators)
            if serialize.emit_action(serialize.parse_action(text)) != text:
                counterexample = {"kind": "roundtrip", "target": name}
                break
            if b.marked is not None:
                text = serialize.emit_blowup_spec(b.marked, b.stabilizer, b.depth, b.ball)
                parsed = serialize.parse_blowup_spec(text)
                if serialize.emit_blowup_spec(*parsed) != text:
                    counterexample = {"kind": "roundtrip-blowup", "target": name}
                    break
    if counterexample is None:
        small = replace(config, cases=25)
        first = _suite_germ_group(small).canonical_json()
        second = _suite_germ_group(small).canonical_json()
        if first != second:
            counterexample = {"kind": "determinism"}
    return Report(
        "structural",
        "blow-up preserves classification; files round-trip; reports are reproducible",
        counterexample is None,
        checked,
        counterexample,
        config,
    )


def _replay_structural(config: SuiteConfig, payload: dict) -> bool:
    if payload.get("kind") == "classification":
        space = serialize.leafspace_from_data(payload["leafspace"])
        gen = CaseGen(config.seed)
        marked = space.canonical(gen.interior_point(space))
        return BlowupSpace(space, {}, marked, depth=2).classify() is not space.classify()
    if "leafspace" in payload:
        text = serialize.emit_leafspace(serialize.leafspace_from_data(payload["leafspace"]))
        return serialize.emit_leafspace(serialize.parse_leafspace(text)) != text
    return False


# ---------------------------------------------------------------------------
# Registry


SUITES: dict[str, tuple[Callable[[SuiteConfig], Report], Callable[[SuiteConfig, dict], bool]]] = {
    "germ-group-axioms": (_suite_germ_group, _replay_germ_group),
    "germ-quotient": (_suite_germ_quotient, _replay_germ_quotient),
    "order-laws": (_suite_order_laws, _replay_order_laws),
    "overlap-rays": (_suite_overlap, _replay_overlap),
    "d-threshold-independence": (_suite_threshold_independence, _replay_threshold_independence),
    "d-homomorphism": (_suite_homomorphism, _replay_homomorphism),
    "d-nontriviality": (_suite_nontriviality, _replay_nontriviality),
    "alpha-action-law": (_suite_action_law, _replay_action_law),
    "trivial-stabilizer": (_suite_stabilizer, _replay_stabilizer),
    "orbit-limit": (_suite_orbit_limit, _replay_orbit_limit),
    "injectivity-certificate": (_suite_injectivity, _replay_injectivity),
    "structural": (_suite_structural, _replay_structural),
}


def run_suite(name: str, config: SuiteConfig) -> Report:
    if name not in SUITES:
        raise SuiteError(f"unknown suite {name!r} (known: {', '.join(sorted(SUITES))})")
    runner, _ = SUITES[name]
    started = time.perf_counter()
    report = runner(config)
    report.elapsed = time.perf_counter() - started
    return report


def replay(name: str, config: SuiteConfig, counterexample: dict) -> bool:
    """Re-run a single failing case; True means it still fails."""
    if name not in SUITES:
        raise SuiteError(f"unknown suite {name!r}")
    _, replayer = SUITES[name]
    return replayer(config, counterexample)
