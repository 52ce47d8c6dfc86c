"""Frozen reference values for regression tests and the table CLI.

Two polynomial tables cover even characteristic: involution counts of the
symplectic groups Sp(2n,q), and of Omega^{+-}(2n,q) for 2n = 0 mod 4 or of
the coset O^{+-} minus Omega^{+-} for 2n = 2 mod 4 (the table alternates by
residue class; the complementary counts follow from the group counts by
additivity).  Polynomials are stored as canonical strings and
parsed on demand, so the renderer round-trips them exactly.

SP_ODD_CHAR_BRUTE holds plain integers frozen from brute-force oracle runs;
there is no in-scope closed formula behind them.
"""

from fractions import Fraction as Q

from .exact import PolyQ, parse_poly, render_poly

# involutions in Sp(2n, q), q even
SP_EVEN_CHAR_INVOLUTIONS = {
    4: "q^6 + q^4 - q^2",
    6: "q^12 + q^10 - q^4",
    8: "q^20 + q^18 + q^16 - q^12 - q^10",
    10: "q^30 + q^28 + q^26 + q^24 - q^20 - q^18 - q^16 - q^14 + q^10",
    12: "q^42 + q^40 + q^38 + 2q^36 - q^30 - q^28 - 2q^26 - q^24 + q^14",
    14: ("q^56 + q^54 + q^52 + 2q^50 + q^48 + q^46 - q^42 - 2q^40 - 2q^38"
         " - 2q^36 - q^34 - q^32 + q^28 + q^26 + q^24"),
    16: ("q^72 + q^70 + q^68 + 2q^66 + 2q^64 + q^62 + q^60 - q^56 - 2q^54"
         " - 2q^52 - 3q^50 - 2q^48 - 2q^46 - q^44 + q^40 + q^38 + q^36"
         " + q^34 + q^32 + q^30 - q^24"),
}

# involutions in Omega^sign(dim, q) for dim = 0 mod 4, q even
OMEGA_EVEN_CHAR_INVOLUTIONS = {
    (4, "+"): "q^4",
    (4, "-"): "q^4",
    (8, "+"): "q^16 + q^12 - q^4",
    (8, "-"): "q^16 + q^12 - q^4",
    (12, "+"): ("q^36 + q^32 + q^30 + q^28 - q^22 - q^20 - q^18 - q^16"
                " + q^10"),
    (12, "-"): ("q^36 + q^32 + q^30 + q^28 - q^22 - q^20 - q^18 - q^16"
                " + q^10"),
    (16, "+"): ("q^64 + q^60 + q^58 + 2q^56 + q^54 + q^52 - q^46 - 2q^44"
                " - 2q^42 - 2q^40 - q^38 - q^36 + q^30 + q^28 + q^26"),
}

# involutions in the coset O^sign minus Omega^sign for dim = 2 mod 4, q even
COSET_EVEN_CHAR_INVOLUTIONS = {
    (6, "+"): "q^9 - q^6",
    (6, "-"): "q^9 + q^6",
    (10, "+"): "q^25 + q^21 - q^20 - q^16 - q^13 + q^8",
    (10, "-"): "q^25 + q^21 + q^20 + q^16 - q^13 - q^8",
    (14, "+"): ("q^49 + q^45 + q^43 - q^42 + q^41 - q^38 - q^36 - q^35"
                " - q^34 - q^33 - q^31 - q^29 + q^28 + q^26 + q^24 + q^23"
                " + q^22 - q^16"),
    (14, "-"): ("q^49 + q^45 + q^43 + q^42 + q^41 + q^38 + q^36 - q^35"
                " + q^34 - q^33 - q^31 - q^29 - q^28 - q^26 - q^24 + q^23"
                " - q^22 + q^16"),
}

# brute-force involution counts with no formula route (frozen oracle output)
SP_ODD_CHAR_BRUTE = {
    (4, 3): 92,
}


def sp_involution_poly(dim: int) -> PolyQ:
    """Involutions in Sp(dim, q) for even q, as a polynomial in q."""
    if dim not in SP_EVEN_CHAR_INVOLUTIONS:
        raise ValueError(f"no symplectic involution fixture for dimension {dim}")
    return parse_poly(SP_EVEN_CHAR_INVOLUTIONS[dim])


def omega_table_poly(dim: int, sign: str) -> PolyQ:
    """The even-characteristic table entry at (dim, sign): the Omega count
    when dim = 0 mod 4, the coset count when dim = 2 mod 4."""
    if sign not in ("+", "-"):
        raise ValueError("sign must be '+' or '-'")
    table = (OMEGA_EVEN_CHAR_INVOLUTIONS if dim % 4 == 0
             else COSET_EVEN_CHAR_INVOLUTIONS)
    if (dim, sign) not in table:
        raise ValueError(f"no table entry for dimension {dim}, sign {sign}")
    return parse_poly(table[(dim, sign)])


def table_rows() -> list:
    """Every fixture as a JSON-friendly dict (polynomials re-rendered from
    the parsed form, which must round-trip)."""
    rows = []
    for dim, text in sorted(SP_EVEN_CHAR_INVOLUTIONS.items()):
        rows.append({"table": "sp_even_char", "family": "Sp", "dim": dim,
                     "count": render_poly(parse_poly(text))})
    for (dim, sign) in sorted(OMEGA_EVEN_CHAR_INVOLUTIONS):
        poly = omega_table_poly(dim, sign)
        rows.append({"table": "omega_even_char", "family": f"Omega{sign}",
                     "dim": dim, "count": render_poly(poly)})
    for (dim, sign) in sorted(COSET_EVEN_CHAR_INVOLUTIONS):
        poly = omega_table_poly(dim, sign)
        rows.append({"table": "omega_even_char",
                     "family": f"O{sign}\\Omega{sign}", "dim": dim,
                     "count": render_poly(poly)})
    for (dim, q), value in sorted(SP_ODD_CHAR_BRUTE.items()):
        rows.append({"table": "sp_odd_char_brute", "family": "Sp", "dim": dim,
                     "q": q, "count": str(value)})
    return rows
