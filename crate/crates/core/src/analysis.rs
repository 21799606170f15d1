//! Closed-form size and treewidth arithmetic for `K_m □ K_n` on square Chimera chips.
//!
//! Treewidths here are formulas, never computed. A `PROVABLY_OPTIMAL` verdict
//! means the product's treewidth lower bound exceeds the treewidth of the next
//! smaller square chip, so no smaller chip can host it as a minor.

use std::fmt;

use crate::cpcg::required_size;
use crate::triangular::region_size;

/// Treewidth of `C(N,N,L)`.
pub fn chimera_treewidth(n: usize, l: usize) -> usize {
    n * l
}

/// `m(n+1)/2 − 1`, a lower bound on `tw(K_m □ K_n)` for odd `n`; `None` for even `n`.
pub fn product_tw_lower_bound(m: usize, n: usize) -> Option<usize> {
    if n.is_multiple_of(2) || m == 0 {
        return None;
    }
    Some((m * (n + 1) / 2).saturating_sub(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ProvablyOptimal,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ProvablyOptimal => "PROVABLY_OPTIMAL",
            Verdict::NotApplicable => "NOT_APPLICABLE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptimalityCertificate {
    pub m: usize,
    pub n: usize,
    pub l: usize,
    /// Chip side the construction uses.
    pub size: usize,
    /// The nexus holds `K_n` instead of `K_m`.
    pub swapped: bool,
    pub product_bound: Option<usize>,
    /// `tw(C(size−1, size−1, L))`.
    pub smaller_chip_treewidth: usize,
    pub verdict: Verdict,
}

/// Certificate that no square chip smaller than the constructive one can host `K_m □ K_n`.
///
/// Applies only when one factor is a multiple of `2L` and the other is odd.
pub fn optimality_certificate(m: usize, n: usize, l: usize) -> OptimalityCertificate {
    let direct = required_size(m, n, l);
    let flipped = required_size(n, m, l);
    let divides = |a: usize| l > 0 && a > 0 && a.is_multiple_of(2 * l);
    let odd = |b: usize| b % 2 == 1;
    let (size, swapped, hypotheses) = if divides(m) && odd(n) {
        (direct, false, true)
    } else if divides(n) && odd(m) {
        (flipped, true, true)
    } else {
        (direct.min(flipped), flipped < direct, false)
    };
    let product_bound = match (odd(n), odd(m)) {
        _ if hypotheses && swapped => product_tw_lower_bound(n, m),
        (true, _) => product_tw_lower_bound(m, n),
        (false, true) => product_tw_lower_bound(n, m),
        _ => None,
    };
    let smaller_chip_treewidth = chimera_treewidth(size.saturating_sub(1), l);
    let proved = hypotheses && product_bound.is_some_and(|b| b > smaller_chip_treewidth);
    OptimalityCertificate {
        m,
        n,
        l,
        size,
        swapped,
        product_bound,
        smaller_chip_treewidth,
        verdict: if proved {
            Verdict::ProvablyOptimal
        } else {
            Verdict::NotApplicable
        },
    }
}

impl fmt::Display for OptimalityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "problem=K_{}xK_{}", self.m, self.n)?;
        writeln!(f, "shore={}", self.l)?;
        writeln!(f, "constructive_size={}", self.size)?;
        writeln!(
            f,
            "nexus_factor={}",
            if self.swapped { self.n } else { self.m }
        )?;
        match self.product_bound {
            Some(b) => writeln!(f, "product_tw_lower_bound={b}")?,
            None => writeln!(f, "product_tw_lower_bound=none")?,
        }
        writeln!(
            f,
            "chimera_tw_at_size_minus_1={}",
            self.smaller_chip_treewidth
        )?;
        write!(f, "verdict={}", self.verdict)
    }
}

/// Largest `n` with `K_m □ K_n` constructible on `C(N,N,L)`; 0 if not even `K_m` fits.
pub fn max_embeddable_n(size: usize, l: usize, m: usize) -> usize {
    if m == 0 || l == 0 || required_size(m, 1, l) > size {
        return 0;
    }
    let mut n = 1;
    while required_size(m, n + 1, l) <= size {
        n += 1;
    }
    n
}

/// Largest `n` whose `K_{mn}` fits the triangular clique scheme on `C(N,N,L)`.
pub fn triangular_max_n(size: usize, l: usize, m: usize) -> usize {
    if m == 0 || l == 0 {
        return 0;
    }
    let mut n = 0;
    while region_size(m * (n + 1), l) <= size {
        n += 1;
    }
    n
}

/// Why a product cannot be built on a given chip, with the treewidth figures that bear on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refusal {
    pub m: usize,
    pub n: usize,
    pub l: usize,
    pub chip: usize,
    pub required: usize,
    pub chip_treewidth: usize,
    /// Best formula bound: the largest odd `n' ≤ n` (or `m' ≤ m`) sub-product.
    pub bound: Option<(usize, usize, usize)>,
    /// `NOT_APPLICABLE` unless the bound exceeds the chip treewidth.
    pub verdict: Verdict,
}

/// `None` when the construction fits the chip.
pub fn refusal(m: usize, n: usize, l: usize, chip: usize) -> Option<Refusal> {
    let required = required_size(m, n, l).min(required_size(n, m, l));
    if required <= chip {
        return None;
    }
    // K_m □ K_n' is a subgraph for every n' ≤ n, so its bound carries over.
    let odd_below = |x: usize| if x % 2 == 1 { x } else { x.saturating_sub(1) };
    let candidates = [(m, odd_below(n)), (n, odd_below(m))];
    let bound = candidates
        .iter()
        .filter(|&&(_, b)| b >= 1)
        .filter_map(|&(a, b)| product_tw_lower_bound(a, b).map(|t| (a, b, t)))
        .max_by_key(|&(_, _, t)| t);
    let chip_treewidth = chimera_treewidth(chip, l);
    let verdict = if bound.is_some_and(|(_, _, t)| t > chip_treewidth) {
        // the chip is provably too small, the same argument as the optimality certificate
        Verdict::ProvablyOptimal
    } else {
        Verdict::NotApplicable
    };
    Some(Refusal {
        m,
        n,
        l,
        chip,
        required,
        chip_treewidth,
        bound,
        verdict,
    })
}

impl Refusal {
    /// The bound alone shows the chip cannot host the product.
    pub fn is_impossibility_proof(&self) -> bool {
        self.verdict == Verdict::ProvablyOptimal
    }
}

impl fmt::Display for Refusal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "status=refused")?;
        writeln!(
            f,
            "reason=K_{}xK_{} needs C({r},{r},{l}); chip is C({c},{c},{l})",
            self.m,
            self.n,
            r = self.required,
            c = self.chip,
            l = self.l
        )?;
        writeln!(f, "chimera_treewidth={}", self.chip_treewidth)?;
        match self.bound {
            Some((a, b, t)) => writeln!(f, "product_tw_lower_bound={t} via K_{a}xK_{b}")?,
            None => writeln!(f, "product_tw_lower_bound=none")?,
        }
        writeln!(f, "verdict={}", self.verdict)?;
        if self.is_impossibility_proof() {
            write!(f, "note=treewidth exceeds the chip's; no embedding exists")
        } else {
            write!(
                f,
                "note=bound does not exceed the chip treewidth; this is not an impossibility proof"
            )
        }
    }
}
