use crate::error::{Error, Result};
use crate::order::Poset;

/// Small posets used as realization targets.
///
/// * `chain n`, `antichain n`
/// * `y`: `c < u < a`, `u < b` (n must be 4 if given)
/// * `p n` (n ≥ 4): maximal `a, b`, `u ≺ a, b`, and `n − 3` minimal elements under `u`
/// * `q n` (n ≥ 3): `n − 2` minimal elements each under both maximal ones
///
/// Ids are assigned bottom-up.
pub fn named_poset(name: &str, n: usize) -> Result<Poset> {
    match name.to_ascii_lowercase().as_str() {
        "chain" => {
            let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            Poset::from_covers(n, &covers)
        }
        "antichain" => Poset::from_covers(n, &[]),
        "y" => {
            if n != 4 {
                return Err(Error::Argument(format!(
                    "the Y poset has 4 elements, not {n}"
                )));
            }
            Poset::from_covers(4, &[(0, 1), (1, 2), (1, 3)])
        }
        "p" => {
            if n < 4 {
                return Err(Error::Argument(format!("P_n needs n >= 4, got {n}")));
            }
            let u = n - 3;
            let mut covers: Vec<_> = (0..u).map(|c| (c, u)).collect();
            covers.push((u, n - 2));
            covers.push((u, n - 1));
            Poset::from_covers(n, &covers)
        }
        "q" => {
            if n < 3 {
                return Err(Error::Argument(format!("Q_n needs n >= 3, got {n}")));
            }
            let mut covers = Vec::new();
            for c in 0..n - 2 {
                covers.push((c, n - 2));
                covers.push((c, n - 1));
            }
            Poset::from_covers(n, &covers)
        }
        other => Err(Error::Argument(format!("unknown poset family '{other}'"))),
    }
}
