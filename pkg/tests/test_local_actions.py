import random

import pytest

from vhcert.complexes import Letter
from vhcert.local_actions import (
    SphereIndex,
    horizontal_local_perm,
    local_group,
    sphere_action,
    vertical_local_perm,
)


def _vletter(spec: str) -> Letter:
    inverted = spec.endswith("'")
    return Letter("v", int(spec.rstrip("'")[1:]), inverted)


def test_lambda_a1_depth1_map(lam):
    # corner rule applied to the four squares containing a1 (and inverse forms)
    lp = vertical_local_perm(lam, Letter("h", 1))
    expected = {
        "b1": "b1", "b2": "b3", "b3": "b2",
        "b1'": "b1'", "b2'": "b3'", "b3'": "b2'",
    }
    for src, dst in expected.items():
        assert lp.depth1[_vletter(src)] == _vletter(dst)


def test_commuting_square_gives_identity_map():
    from vhcert.complexes import parse_complex

    c = parse_complex(
        "complex torus\nhorizontal a1\nvertical b1\nsquare a1 b1 a1^-1 b1^-1\n"
    )
    lp = vertical_local_perm(c, Letter("h", 1))
    assert all(lp.depth1[b] == b for b in c.vertical_letters())


def test_sigma_a6_maps_b3_to_b4(sigma):
    lp = vertical_local_perm(sigma, Letter("h", 6))
    assert lp.depth1[Letter("v", 3)] == Letter("v", 4)


def test_lambda_b1_fixes_a1(lam):
    lp = horizontal_local_perm(lam, Letter("v", 1))
    assert lp.depth1[Letter("h", 1)] == Letter("h", 1)


def test_sigma_b4_maps_a3_to_a1_inverse(sigma):
    lp = horizontal_local_perm(sigma, Letter("v", 4))
    assert lp.depth1[Letter("h", 3)] == Letter("h", 1, True)


def test_depth1_maps_are_bijections(lam, delta, sigma):
    for c in (lam, delta, sigma):
        for x in c.horizontal_letters():
            lp = vertical_local_perm(c, x)
            assert sorted(lp.depth1.values()) == sorted(c.vertical_letters())
        for x in c.vertical_letters():
            lp = horizontal_local_perm(c, x)
            assert sorted(lp.depth1.values()) == sorted(c.horizontal_letters())


def test_sphere_action_depth1_is_depth1_map(lam):
    sphere = SphereIndex(lam, "v", 1)
    lp = vertical_local_perm(lam, Letter("h", 2))
    perm = sphere_action(lam, Letter("h", 2), 1, sphere)
    for i, (letter,) in enumerate(sphere.words):
        assert sphere.words[perm(i)] == (lp.depth1[letter],)


def test_prefix_projection_intertwines(lam, delta, sigma):
    # deleting the last letter of a depth-2 word commutes with the action
    for c in (lam, delta, sigma):
        s2 = SphereIndex(c, "v", 2)
        s1 = SphereIndex(c, "v", 1)
        for x in c.horizontal_letters():
            p2 = sphere_action(c, x, 2, s2)
            p1 = sphere_action(c, x, 1, s1)
            for i, word in enumerate(s2.words):
                image2 = s2.words[p2(i)]
                image1 = s1.words[p1(s1.position[word[:1]])]
                assert image2[:1] == image1


def test_sphere_images_are_reduced_words(lam, delta, sigma):
    # Permutation construction would fail on a non-reduced image (missing
    # from the index); assert explicitly for k <= 2 on the whole corpus.
    for c in (lam, delta, sigma):
        for k in (1, 2):
            sphere = SphereIndex(c, "v", k)
            for x in c.horizontal_letters():
                perm = sphere_action(c, x, k, sphere)
                images = {sphere.words[perm(i)] for i in range(len(sphere))}
                assert len(images) == len(sphere)


def test_sphere_size_formula(sigma):
    assert len(SphereIndex(sigma, "h", 2)) == 12 * 11
    assert len(SphereIndex(sigma, "v", 2)) == 8 * 7
    assert len(SphereIndex(sigma, "v", 3)) == 8 * 7 * 7


def test_depth_cap():
    from vhcert import corpus

    lam = corpus.load("lambda")
    with pytest.raises(ValueError, match="cap"):
        sphere_action(lam, Letter("h", 1), 4)
    # raising the cap lifts the restriction
    sphere_action(lam, Letter("h", 1), 4, max_depth=4)


def test_local_group_orders_depth1(lam, sigma):
    assert local_group(lam, "v", 1).order == 360
    assert local_group(lam, "h", 1).order == 360
    assert local_group(sigma, "h", 1).order == 95040
    assert local_group(sigma, "v", 1).order == 20160


def test_depth1_order_divides_factorial(lam, delta, sigma):
    import math

    for c in (lam, delta, sigma):
        assert math.factorial(2 * c.m) % local_group(c, "h", 1).order == 0
        assert math.factorial(2 * c.n) % local_group(c, "v", 1).order == 0


def test_lambda_depth2_order(lam):
    assert local_group(lam, "v", 2).order == 360 * 60**6


def test_order_invariant_under_relabelling(lam):
    # shuffle the sphere enumeration; generated-group order cannot change
    rng = random.Random(7)
    letters = lam.vertical_letters()
    rng.shuffle(letters)
    shuffled = SphereIndex(lam, "v", 2, letters=letters)
    assert local_group(lam, "v", 2, sphere=shuffled).order == 360 * 60**6
