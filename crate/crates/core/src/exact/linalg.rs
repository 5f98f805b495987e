//! Exact Gaussian elimination for (possibly overdetermined) rational systems.

use num_traits::Zero;

use super::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveFailure {
    /// Fewer independent equations than unknowns.
    RankDeficient { rank: usize, unknowns: usize },
    /// The system is inconsistent; `row` is the first equation violated by the
    /// solution determined from the independent rows.
    Inconsistent { row: usize },
}

/// Solves `rows · c = rhs` for a unique `c`, using every row: the pivot rows
/// determine the solution and all remaining rows must be satisfied exactly.
pub fn solve_exact(
    rows: &[Vec<Rational>],
    rhs: &[Rational],
) -> Result<Vec<Rational>, SolveFailure> {
    assert_eq!(rows.len(), rhs.len());
    let unknowns = rows.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivot_row = 0;
    let mut pivots = Vec::with_capacity(unknowns);
    for col in 0..unknowns {
        let Some(p) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][col].recip();
        for v in m[pivot_row][col..].iter_mut() {
            *v *= &inv;
        }
        let pivot = m[pivot_row].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == pivot_row || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, pv) in row[col..].iter_mut().zip(&pivot[col..]) {
                *v -= &f * pv;
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if pivots.len() < unknowns {
        return Err(SolveFailure::RankDeficient {
            rank: pivots.len(),
            unknowns,
        });
    }
    let solution: Vec<Rational> = (0..unknowns).map(|i| m[i][unknowns].clone()).collect();

    for (i, (row, b)) in rows.iter().zip(rhs).enumerate() {
        let lhs: Rational = row.iter().zip(&solution).map(|(a, c)| a * c).sum();
        if &lhs != b {
            return Err(SolveFailure::Inconsistent { row: i });
        }
    }
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn overdetermined_consistent() {
        // c0 + c1 = 3, c0 - c1 = 1, 2c0 + c1 = 5
        let rows = vec![
            vec![int(1), int(1)],
            vec![int(1), int(-1)],
            vec![int(2), int(1)],
        ];
        let sol = solve_exact(&rows, &[int(3), int(1), int(5)]).unwrap();
        assert_eq!(sol, vec![int(2), int(1)]);
    }

    #[test]
    fn detects_inconsistency_and_rank() {
        let rows = vec![
            vec![int(1), int(1)],
            vec![int(1), int(-1)],
            vec![int(0), int(1)],
        ];
        assert_eq!(
            solve_exact(&rows, &[int(3), int(1), rat(1, 2)]),
            Err(SolveFailure::Inconsistent { row: 2 })
        );
        let rows = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert!(matches!(
            solve_exact(&rows, &[int(1), int(2)]),
            Err(SolveFailure::RankDeficient { rank: 1, .. })
        ));
    }
}
