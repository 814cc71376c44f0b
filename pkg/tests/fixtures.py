"""Hand-encoded opetopes used across the test suite."""

from opetopes.opetope import from_trees
from opetopes.trees import Tree

G0 = ("0", ["*"])
G1 = ("1", ["0"])
G2 = ("2", [("3", [("4", ["1"])])])
G3 = ("5", ["4", ("6", ["2", ("7", ["3"])])])
G4 = ("8", [("10", []), ("9", [("11", ["5"]), ("12", ["6", "7"])])])
G5 = ("13", [("14", ["8", "10"]), ("15", ["9", "11"]), ("16", []), "12"])


def example_x():
    """The 5-opetope with spheres 1..16 used for the face computations."""
    return from_trees([G0, G1, G2, G3, G4, G5],
                      [{}, {}, {}, {}, {"4": ("10",)}, {"12": ("16",)}])


def source_13():
    return from_trees([G0, G1, G2, G3, ("14", [("15", ["5", ("16", [("12", ["6", "7"])])])])])


def source_14():
    return from_trees([G0, G1, G2, ("9", ["4", "2", "3"]), ("8", ["9", ("10", [])])],
                      [{}, {}, {}, {}, {"4": ("10",)}])


def source_15():
    return from_trees([G0, G1, G2, ("5", ["4", ("12", ["2", "3"])]),
                       ("9", [("11", ["5"]), "12"])])


def source_16():
    return from_trees([("0", ["*"]), ("4", ["0"]), ("2", [("3", ["4"])]),
                       ("12", ["2", "3"]), "12"])


# the gluing example: R is glued along facet f with S on top

_RG2 = ("p1", [("p2", [("p3", [("p4", ["1"])])])])
_RG3 = ("r0", [("r1", [("r2", [("r3", ["p1"]), "p2"])]), ("r4", ["p3", "p4"])])
_RG4 = ("rho", [("x", [("a", ["r2", "r3"]), ("y", ["r0", "r1"])]), "r4"])
_RG5 = ("w", [("f", ["a", ("b", []), ("c", ["x", "y"])]), "rho", ("z0", [])])


def glue_r():
    return from_trees([G0, G1, _RG2, _RG3, _RG4, _RG5],
                      [{}, {}, {}, {}, {}, {"r1": ("b",), "r4": ("z0",)}])


def glue_f():
    """The source of R at f."""
    return from_trees([G0, G1, ("p1", [("p2", [("r4", ["1"])])]),
                       ("r0", [("r1", [("r2", [("r3", ["p1"]), "p2"])]), "r4"]),
                       ("c", [("a", ["r2", "r3"]), "r0", ("b", ["r1"])])])


def glue_s():
    g5 = ("O", [("N1", []), "a", "b", ("P", [("Q", ["c"]), ("N2", [])])])
    F = glue_f()
    return F.extend(Tree.from_nested(g5), {"r3": ("N1",), "r0": ("N2",)})


def glue_t():
    g5 = ("w", [("f", ["a", ("b", []), ("N1", []), ("P", [("Q", [("c", ["x", "y"])]), ("N2", [])])]),
                "rho", ("z0", [])])
    return from_trees([G0, G1, _RG2, _RG3, _RG4, g5],
                      [{}, {}, {}, {}, {}, {"r1": ("b",), "r3": ("N1",), "r0": ("N2",), "r4": ("z0",)}])


def glue_fill_top():
    """Top tree of the filler: the scar encloses f and the copied spheres."""
    return Tree.from_nested(("outer", [("scar", ["f", "N1", "P", "Q", "N2"]), "w", "b", "c", "z0"]))


# the 5-opetope drawn as a single zoom: Z4 is a planar tree with dots b (root),
# a and c, spheres p (outer), x (null) and y; Z5 has one outer sphere o and a
# null-sphere w on the leaf edge a

Z_G2 = ("s1", [("s2", [("s3", ["1"])])])
Z_G3 = ("b", [("a", ["s3"]), ("c", ["s2", "s1"])])
Z_G4 = ("p", [("x", []), ("y", ["a", "b", "c"])])
Z_G5 = ("o", ["p", "x", "y", ("w", [])])


def example_z():
    return from_trees([G0, G1, Z_G2, Z_G3, Z_G4, Z_G5],
                      [{}, {}, {}, {}, {"b": ("x",)}, {"a": ("w",)}])


def z_source_o():
    return from_trees([G0, G1, Z_G2, Z_G3, ("p", [("x", []), ("y", [("w", ["a"]), "b", "c"])])],
                      [{}, {}, {}, {}, {"b": ("x",)}])


def z_source_w():
    return from_trees([G0, G1, ("s3", ["1"]), ("a", ["s3"]), "a"])


def two_branch():
    """A degree-1 zoom complex with a non-trivial involution swapping u and v."""
    from opetopes.opetope import Level, ZoomComplex
    base = Tree.from_nested(("d", ["m", "ea", "eb"]))
    top = Tree.from_nested(("s", ["d", ("u", []), ("v", [])]))
    return ZoomComplex(base, [Level(top, {"ea": ("u",), "eb": ("v",)})])
