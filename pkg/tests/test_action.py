from fractions import Fraction as F

import pytest

from germkit.action import (
    ActionError,
    FULL_LINE,
    Homeo,
    UnknownGeneratorError,
    Word,
    apply_homeo,
    compose_homeo,
    identity_homeo,
    induced_germ,
    invert_homeo,
    moved_point_witness,
    overlap_ray,
    reduced_words,
    validate_homeo,
    word_germ,
    word_homeo,
)
from germkit.examples import bundle
from germkit.germ import Germ
from germkit.leafspace import LeafSpace, Point, Side, root_embedding
from germkit.plmap import PLMap


def line():
    return LeafSpace.build(Side.NEGATIVE, {"r": (None, None)})


def two_siblings():
    return LeafSpace.build(
        Side.NEGATIVE,
        {"r": (None, None), "b1": ("r", F(0)), "b2": ("r", F(0))},
    )


def sibling_swap(L):
    ident = PLMap.identity()
    return Homeo(
        {"r": "r", "b1": "b2", "b2": "b1"},
        {"r": ident, "b1": ident, "b2": ident},
        name="swap",
    )


def translation(L, amount=1):
    shift = PLMap.affine(1, amount)
    return Homeo({b: b for b in L.branches}, {b: shift for b in L.branches}, name="t")


class TestValidate:
    def test_identity_ok(self):
        for name in ("e1", "e2", "e3"):
            b = bundle(name)
            assert validate_homeo(b.space, identity_homeo(b.space)) is None

    def test_sibling_swap_ok(self):
        L = two_siblings()
        assert validate_homeo(L, sibling_swap(L)) is None

    def test_negative_slope_reports_orientation(self):
        L = line()
        bad_pl = PLMap(breakpoints=(), values=(), left_slope=F(-1),
                       right_slope=F(-1), tail_offset=F(0))
        h = Homeo({"r": "r"}, {"r": bad_pl})
        report = validate_homeo(L, h)
        assert report is not None and "orientation" in report

    def test_incompatible_departure_image(self):
        L = two_siblings()
        # translating everything by 1 moves the branch point: not a homeo here
        report = validate_homeo(L, translation(L))
        assert report is not None and "departure" in report

    def test_child_parent_disagreement(self):
        L = two_siblings()
        ident = PLMap.identity()
        squash = PLMap.make([(0, 0)], 1, F(1, 2))
        h = Homeo({"r": "r", "b1": "b1", "b2": "b2"},
                  {"r": ident, "b1": squash, "b2": ident})
        report = validate_homeo(L, h)
        assert report is not None and "disagree" in report

    def test_not_a_bijection(self):
        L = two_siblings()
        ident = PLMap.identity()
        h = Homeo({"r": "r", "b1": "b1", "b2": "b1"},
                  {"r": ident, "b1": ident, "b2": ident})
        report = validate_homeo(L, h)
        assert report is not None and "bijection" in report


class TestApply:
    def test_translation_on_line(self):
        L = line()
        assert apply_homeo(L, translation(L), Point("r", F(0))) == Point("r", F(1))

    def test_sibling_swap_moves_lower_ray(self):
        L = two_siblings()
        h = sibling_swap(L)
        assert apply_homeo(L, h, Point("b1", F(-2))) == Point("b2", F(-2))

    def test_image_canonicalizes_into_parent(self):
        b = bundle("e2")
        h = b.generators["s"]
        # the root's upper ray is sent through branch b and glued back
        assert apply_homeo(b.space, h, Point("r", F(5))) == Point("r", F(5))
        assert apply_homeo(b.space, h, Point("r", F(-5))) == Point("b", F(-5))

    def test_unknown_branch(self):
        L = line()
        h = Homeo({"r": "r"}, {"r": PLMap.identity()})
        with pytest.raises(ActionError):
            apply_homeo(L, h, Point("zz", F(0)))

    def test_composition_soundness(self):
        b = bundle("e3")
        f, k = b.generators["f"], b.generators["k"]
        fk = compose_homeo(b.space, f, k)
        samples = [Point("b1", F(-3, 2)), Point("b2", F(-1)), Point("r", F(2))]
        for p in samples:
            p = b.space.canonical(p)
            assert apply_homeo(b.space, fk, p) == apply_homeo(
                b.space, f, apply_homeo(b.space, k, p)
            )

    def test_inverse_soundness(self):
        b = bundle("e3")
        k = b.generators["k"]
        kinv = invert_homeo(b.space, k)
        for p in (Point("b1", F(-7, 3)), Point("r", F(1, 2))):
            p = b.space.canonical(p)
            assert apply_homeo(b.space, kinv, apply_homeo(b.space, k, p)) == p


class TestOverlapRay:
    def test_swap_into_child(self):
        b = bundle("e2")
        e = root_embedding(b.space)
        assert overlap_ray(b.space, b.generators["s"], e) == F(0)

    def test_translation_is_full_line(self):
        L = line()
        e = root_embedding(L)
        assert overlap_ray(L, translation(L), e) is FULL_LINE

    def test_grandchild_threshold_is_max_departure(self):
        # Probe the scan on a partially specified map sending the root chart
        # into a grandchild whose chain departs at 0 and 2.
        L = LeafSpace.build(
            Side.NEGATIVE,
            {"r": (None, None), "p": ("r", F(2)), "g": ("p", F(0))},
        )
        e = root_embedding(L)
        probe = Homeo({"r": "g"}, {"r": PLMap.identity()})
        assert overlap_ray(L, probe, e) == F(2)

    def test_points_above_return_and_witness_below(self):
        b = bundle("e2")
        e = root_embedding(b.space)
        h = b.generators["s"]
        t = overlap_ray(b.space, h, e)
        for d in (F(1, 3), 1, 10):
            image = apply_homeo(b.space, h, e.point_at(b.space, t + d))
            assert e.contains(b.space, image)
        at_threshold = apply_homeo(b.space, h, e.point_at(b.space, t))
        assert not e.contains(b.space, at_threshold)


class TestInducedGerm:
    def test_translation(self):
        L = line()
        e = root_embedding(L)
        assert induced_germ(L, translation(L), e) == Germ(1, 1)

    def test_branch_data_is_forgotten(self):
        b = bundle("e2")
        e = root_embedding(b.space)
        assert induced_germ(b.space, b.generators["s"], e) == Germ.identity()

    def test_root_tail_wins(self):
        b = bundle("e3")
        e = root_embedding(b.space)
        assert induced_germ(b.space, b.generators["f"], e) == Germ(2, 0)
        assert induced_germ(b.space, b.generators["k"], e) == Germ(3, 1)

    def test_threshold_independence(self):
        for name in ("e1", "e2", "e3"):
            b = bundle(name)
            e = root_embedding(b.space)
            for h in b.generators.values():
                t = overlap_ray(b.space, h, e)
                base = F(0) if t is None else t
                assert (
                    induced_germ(b.space, h, e, threshold=base)
                    == induced_germ(b.space, h, e, threshold=base + 10)
                    == induced_germ(b.space, h, e)
                )

    def test_threshold_below_overlap_rejected(self):
        b = bundle("e2")
        e = root_embedding(b.space)
        with pytest.raises(ActionError):
            induced_germ(b.space, b.generators["s"], e, threshold=F(-1))


class TestWords:
    def test_parse_and_str(self):
        w = Word.parse("f g^-1 f")
        assert str(w) == "f g^-1 f"
        assert len(w) == 3

    def test_power_sugar(self):
        assert Word.parse("f^3") == Word.parse("f f f")
        assert Word.parse("f^-2") == Word.parse("f^-1 f^-1")

    def test_free_reduction(self):
        assert Word.parse("g g^-1").is_identity()
        assert Word.parse("f g g^-1 f").letters == (("f", 1), ("f", 1))

    def test_inverse(self):
        w = Word.parse("f g^-1")
        assert (~w).letters == (("g", 1), ("f", -1))
        assert (w * ~w).is_identity()

    def test_reduced_words_count(self):
        words = reduced_words(["f", "k"], 3)
        assert len(words) == 1 + 4 + 12 + 36
        assert len(set(w.letters for w in words)) == len(words)


class TestWordGerm:
    def test_shift_then_double(self):
        L = line()
        gens = {
            "t": translation(L),
            "d": Homeo({"r": "r"}, {"r": PLMap.affine(2, 0)}, name="d"),
        }
        e = root_embedding(L)
        # t after d: x -> 2x + 1; letterwise (1,1)*(2,0) agrees
        assert word_germ(L, gens, Word.parse("t d"), e) == Germ(2, 1)
        assert Germ(1, 1) * Germ(2, 0) == Germ(2, 1)

    def test_empty_word(self):
        b = bundle("e3")
        e = root_embedding(b.space)
        assert word_germ(b.space, b.generators, Word(), e) == Germ.identity()

    def test_cancelling_word(self):
        b = bundle("e3")
        e = root_embedding(b.space)
        assert word_germ(b.space, b.generators, Word.parse("k k^-1"), e) == Germ.identity()

    def test_undeclared_generator(self):
        b = bundle("e1")
        e = root_embedding(b.space)
        with pytest.raises(UnknownGeneratorError):
            word_germ(b.space, b.generators, Word.parse("zz"), e)

    def test_inverse_word_inverts_germ(self):
        b = bundle("e3")
        e = root_embedding(b.space)
        for text in ("f", "k", "f k", "k f^-1 k"):
            w = Word.parse(text)
            assert word_germ(b.space, b.generators, ~w, e) == ~word_germ(
                b.space, b.generators, w, e
            )


class TestMovedWitness:
    def test_translation_witness(self):
        L = line()
        e = root_embedding(L)
        m = moved_point_witness(L, translation(L), e, F(100))
        assert m == 101

    def test_identity_has_no_witness(self):
        L = line()
        e = root_embedding(L)
        assert moved_point_witness(L, identity_homeo(L), e, F(0)) is None

    def test_support_below_zero(self):
        L = line()
        e = root_embedding(L)
        # moves only (-oo, 0): identity at and above 0
        pl = PLMap.make([(-1, -2), (0, 0)], 2, 1)
        h = Homeo({"r": "r"}, {"r": pl}, name="low")
        assert moved_point_witness(L, h, e, F(0)) is None
        assert induced_germ(L, h, e) == Germ.identity()
        m = moved_point_witness(L, h, e, F(-10))
        assert m is not None and m <= 0
        assert apply_homeo(L, h, e.point_at(L, m)) != e.point_at(L, m)

    def test_branch_swap_fixes_upper_ray(self):
        b = bundle("e2")
        e = root_embedding(b.space)
        s = b.generators["s"]
        assert moved_point_witness(b.space, s, e, F(0)) is None
        m = moved_point_witness(b.space, s, e, F(-10))
        assert m is not None and m <= 0

    def test_witness_implies_nontrivial_germ(self):
        b = bundle("e3")
        e = root_embedding(b.space)
        for name, h in b.generators.items():
            cuts = (F(0), F(10**3), F(10**6))
            found = [moved_point_witness(b.space, h, e, n) for n in cuts]
            assert all(m is not None for m in found)
            assert not induced_germ(b.space, h, e).is_identity()


class TestSwappedLines:
    """Random line swaps: finite overlap thresholds beyond the one bundle."""

    def test_overlap_is_the_departure(self):
        from germkit.fuzz import CaseGen

        gen = CaseGen(21)
        for _ in range(25):
            space, swap, d = gen.swap_pair()
            assert validate_homeo(space, swap) is None
            e = root_embedding(space)
            assert overlap_ray(space, swap, e) == d
            assert induced_germ(space, swap, e) == Germ.identity()
            assert moved_point_witness(space, swap, e, d) is None
            m = moved_point_witness(space, swap, e, d - 10)
            assert m is not None and m <= d

    def test_composite_with_vertical_map(self):
        # swap then stretch: finite overlap with a nontrivial germ
        from germkit.fuzz import CaseGen

        gen = CaseGen(22)
        for _ in range(15):
            space, swap, d = gen.swap_pair()
            vertical = gen.homeo(space)
            composite = compose_homeo(space, vertical, swap)
            assert validate_homeo(space, composite) is None
            e = root_embedding(space)
            expected = induced_germ(space, vertical, e)
            assert induced_germ(space, composite, e) == expected
            t = overlap_ray(space, composite, e)
            base = F(0) if t is None else t
            assert induced_germ(space, composite, e, threshold=base + 10) == expected


class TestLazyExtension:
    """Actions describing a finite window of a larger space."""

    @staticmethod
    def windowed():
        # the file declares only c0; the generator swaps c0 with an
        # undeclared sibling c1
        L = LeafSpace.build(Side.NEGATIVE, {"r": (None, None), "c0": ("r", F(0))})
        ident = PLMap.identity()
        swap = Homeo(
            {"r": "r", "c0": "c1", "c1": "c0"},
            {"r": ident, "c0": ident, "c1": ident},
            name="v",
        )
        return L, {"v": swap}

    def test_default_rejects(self):
        from germkit.action import extend_space_for_action

        L, gens = self.windowed()
        assert extend_space_for_action(L, gens, 0) is L
        assert validate_homeo(L, gens["v"]) is not None

    def test_extension_closes_the_action(self):
        from germkit.action import extend_space_for_action

        L, gens = self.windowed()
        bigger = extend_space_for_action(L, gens, 4)
        assert set(bigger.branches) == {"r", "c0", "c1"}
        assert bigger.parent("c1") == "r"
        assert bigger.departure("c1") == F(0)
        assert validate_homeo(bigger, gens["v"]) is None

    def test_bound_is_enforced(self):
        from germkit.action import extend_space_for_action

        L = LeafSpace.build(Side.NEGATIVE, {"r": (None, None), "c0": ("r", F(0))})
        shift = PLMap.affine(1, 1)
        # a genuinely infinite window: c0 -> c1 -> c2 -> ... never closes up
        comb = Homeo(
            {"r": "r", "c0": "c1", "c1": "c2", "c2": "c3"},
            {"r": shift, "c0": shift, "c1": shift, "c2": shift},
            name="u",
        )
        with pytest.raises(ActionError, match="new branches"):
            extend_space_for_action(L, {"u": comb}, 2)

    def test_root_image_cannot_be_created(self):
        from germkit.action import extend_space_for_action

        L = LeafSpace.build(Side.NEGATIVE, {"r": (None, None)})
        h = Homeo({"r": "elsewhere"}, {"r": PLMap.identity()})
        with pytest.raises(ActionError, match="root"):
            extend_space_for_action(L, {"h": h}, 5)


def test_word_homeo_matches_letter_application():
    b = bundle("e3")
    w = Word.parse("f k^-1 f f")
    h = word_homeo(b.space, b.generators, w)
    p = b.space.canonical(Point("b1", F(-1)))
    step = p
    for name, exp in reversed(w.letters):
        g = b.generators[name]
        if exp == -1:
            g = invert_homeo(b.space, g)
        step = apply_homeo(b.space, g, step)
    assert apply_homeo(b.space, h, p) == step
