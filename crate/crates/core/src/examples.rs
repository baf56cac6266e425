//! Built-in arrangements used by the command line and the test suites.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::poset::{partition_lattice, GradedPoset};
use crate::supportcoh::{affine_support, custom_support, projective_support, SupportModule};

const QUADRIC_P3: &str = include_str!("../assets/quadric_p3.json");

/// `n` distinct lines through one point of `P²`.
pub fn lines_p2(n: usize) -> Result<SupportModule> {
    if n < 2 {
        return Err(Error::Schema("lines-p2 needs at least two lines".into()));
    }
    let mut ids = vec!["P2".to_string(), "p".to_string()];
    let mut covers = Vec::new();
    for i in 0..n {
        let line = format!("L{i}");
        covers.push(("P2".to_string(), line.clone()));
        covers.push((line.clone(), "p".to_string()));
        ids.push(line);
    }
    let l = GradedPoset::from_covers(ids, &covers)?;
    let codims: Vec<usize> = (0..l.len()).map(|x| l.rank(x)).collect();
    projective_support(2, &l, &codims)
}

/// A smooth quadric `Q`, a line `L_τ` tangent to it at `p_τ` and a line `L_t`
/// through `p_τ` meeting `Q` once more, in `P³`; indexed by atom subsets.
pub fn quadric_p3() -> Result<SupportModule> {
    custom_support(QUADRIC_P3)
}

pub fn quadric_p3_json() -> &'static str {
    QUADRIC_P3
}

/// Braid arrangement in `C^n`: the partition lattice of `K_n`.
pub fn braid(n: usize) -> Result<SupportModule> {
    if !(2..=5).contains(&n) {
        return Err(Error::Schema("braid(n) is available for 2 ≤ n ≤ 5".into()));
    }
    affine_support(n, &partition_lattice(&Graph::complete(n)))
}

/// `n` coordinate hyperplanes of `C^n`.
pub fn boolean(n: usize) -> Result<SupportModule> {
    if n > 6 {
        return Err(Error::Schema("boolean(n) is available for n ≤ 6".into()));
    }
    affine_support(n, &GradedPoset::boolean(n))
}

pub const NAMES: [&str; 5] = ["lines-p2", "quadric-p3", "braid", "chromatic", "boolean"];
