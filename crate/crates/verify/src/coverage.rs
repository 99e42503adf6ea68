//! Which check covers which statement.

use crate::checks::CATALOG;

pub struct Statement {
    pub label: &'static str,
    pub checks: &'static [&'static str],
}

pub const MANIFEST: &[Statement] = &[
    Statement {
        label: "Fourier transform on a compact group and block direct sums",
        checks: &["C-FOURIER-RT", "C-PARSEVAL", "C-CONV-THM", "C-DUAL-VALID"],
    },
    Statement {
        label: "Young functions, complementary pairs and the doubling condition",
        checks: &["C-YOUNG", "C-DELTA2"],
    },
    Statement {
        label: "Luxemburg and Orlicz norms",
        checks: &["C-ORLICZ-DUALITY"],
    },
    Statement {
        label: "convolution bound from the L1 ball into L^Phi",
        checks: &["C-L1SUP"],
    },
    Statement {
        label: "vector measure of an operator, variation and semivariation",
        checks: &["C-VAR-FT", "C-SEMIVAR-SANDWICH", "C-SEMIVAR-PATHS"],
    },
    Statement {
        label: "variation of the Fourier measure coincides with Haar measure",
        checks: &["C-VAR-FT", "C-VAR-FT-HS"],
    },
    Statement {
        label: "Fourier measure has the null sets of Haar measure",
        checks: &["C-NULLSETS"],
    },
    Statement {
        label: "L1 of the Fourier measure coincides with L1(G)",
        checks: &["C-FT-L1"],
    },
    Statement {
        label: "integration against the Fourier measure is the Fourier transform",
        checks: &["C-FT-EXT"],
    },
    Statement {
        label: "Hausdorff-Young: the Fourier transform is bounded from L^Phi to the block space",
        checks: &["C-HY-RATIO"],
    },
    Statement {
        label: "Hausdorff-Young measure: L1(G) embeds in its optimal domain",
        checks: &["C-HY-L1"],
    },
    Statement {
        label: "Hausdorff-Young measure: integration is the Fourier transform",
        checks: &["C-FT-EXT"],
    },
    Statement {
        label: "convolution with g equals integration of the orbit map",
        checks: &["C-ORBIT"],
    },
    Statement {
        label: "atoms of the density measure are given by the orbit map",
        checks: &["C-ORBIT"],
    },
    Statement {
        label: "a convolution measure determines its density",
        checks: &["C-DENSITY-RT"],
    },
    Statement {
        label: "two-sided bound on the semivariation of a convolution measure",
        checks: &["C-SEMIVAR-SANDWICH", "C-SEMIVAR-PATHS"],
    },
    Statement {
        label: "optimal-domain norm as a supremum over the dual ball",
        checks: &["C-L1NU-EQ", "C-L1NU-IND"],
    },
    Statement {
        label: "optimal-domain norm is bounded by ||f||_Phi ||mu||",
        checks: &["C-L1NU-UPPER", "C-INCL-BRACKET"],
    },
    Statement {
        label: "L1 inclusion of the optimal domain with constant over |mu(G)|",
        checks: &["C-INCL-L1", "C-INCL-BRACKET"],
    },
    Statement {
        label: "integration against the convolution measure is convolution",
        checks: &["C-EO", "C-ADJOINT", "C-INTEGRATION-NORM"],
    },
    Statement {
        label: "compactness: the density measure has variation ||f||_Phi Haar",
        checks: &["C-VARIATION-DENSITY"],
    },
    Statement {
        label: "L1(G) and the optimal domain of a convolution measure coincide",
        checks: &["C-SANDWICH"],
    },
    Statement {
        label: "convolution measures have the null sets of Haar measure",
        checks: &["C-NULLSETS"],
    },
];

/// Catalog ids that no statement refers to.
pub fn uncovered_checks() -> Vec<&'static str> {
    CATALOG
        .iter()
        .map(|c| c.id)
        .filter(|id| !MANIFEST.iter().any(|s| s.checks.contains(id)))
        .collect()
}
