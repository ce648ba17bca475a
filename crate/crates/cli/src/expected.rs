//! Frozen reference data for the verification suite: the multiplication
//! table of the reference threefold and the generators of its degree-(2,2)
//! indeterminacy submodule, transcribed once and kept independent of the
//! engine that recomputes them.

/// Order of the `H^{2,2}` basis the coefficients refer to.
pub const H22_BASIS: [&str; 7] = ["G^2", "E_P^2", "E_Q^2", "E_R^2", "GE_C", "GE_L1", "GE_L2"];

pub const DIVISORS: [&str; 7] = ["G", "E_P", "E_Q", "E_R", "E_C", "E_L1", "E_L2"];

/// Upper triangle of the divisor multiplication table; the rest follows by
/// symmetry.
pub const TABLE: [(&str, &str, [i64; 7]); 28] = [
    ("G", "G", [1, 0, 0, 0, 0, 0, 0]),
    ("G", "E_P", [0, 0, 0, 0, 0, 0, 0]),
    ("G", "E_Q", [0, 0, 0, 0, 0, 0, 0]),
    ("G", "E_R", [0, 0, 0, 0, 0, 0, 0]),
    ("G", "E_C", [0, 0, 0, 0, 1, 0, 0]),
    ("G", "E_L1", [0, 0, 0, 0, 0, 1, 0]),
    ("G", "E_L2", [0, 0, 0, 0, 0, 0, 1]),
    ("E_P", "E_P", [0, 1, 0, 0, 0, 0, 0]),
    ("E_P", "E_Q", [0, 0, 0, 0, 0, 0, 0]),
    ("E_P", "E_R", [0, 0, 0, 0, 0, 0, 0]),
    ("E_P", "E_C", [0, 0, 0, 0, 1, 0, 0]),
    ("E_P", "E_L1", [0, 0, 0, 0, 0, 0, 0]),
    ("E_P", "E_L2", [0, 0, 0, 0, 0, 0, 0]),
    ("E_Q", "E_Q", [0, 0, 1, 0, 0, 0, 0]),
    ("E_Q", "E_R", [0, 0, 0, 0, 0, 0, 0]),
    ("E_Q", "E_C", [0, 0, 0, 0, 1, 0, 0]),
    ("E_Q", "E_L1", [0, 0, 0, 0, 0, 0, 0]),
    ("E_Q", "E_L2", [0, 0, 0, 0, 0, 0, 0]),
    ("E_R", "E_R", [0, 0, 0, 1, 0, 0, 0]),
    ("E_R", "E_C", [0, 0, 0, 0, 0, 0, 0]),
    ("E_R", "E_L1", [0, 0, 0, 0, 0, 1, 0]),
    ("E_R", "E_L2", [0, 0, 0, 0, 0, 0, 1]),
    ("E_C", "E_C", [-1, -1, -1, 0, -2, 0, 0]),
    ("E_C", "E_L1", [0, 0, 0, 0, 0, 1, 0]),
    ("E_C", "E_L2", [0, 0, 0, 0, 0, 0, 1]),
    ("E_L1", "E_L1", [-1, 0, 0, -1, 1, -1, 0]),
    ("E_L1", "E_L2", [0, 0, 0, 0, 0, 0, 0]),
    ("E_L2", "E_L2", [-1, 0, 0, -1, 1, 0, -1]),
];

/// Generators of the degree-(2,2) piece of the submodule generated by
/// `E_C - E_R` and `E_R + E_L1 + E_L2`.
pub const INDETERMINACY_GENERATORS: [&str; 5] =
    ["GE_C", "E_R^2", "E_P^2+E_Q^2", "GE_L1+GE_L2", "G^2"];
