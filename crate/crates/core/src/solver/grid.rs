use crate::error::{invalid, Result};

/// Uniform partition of the box Π(a_j, b_j) with equal mesh size h in every
/// direction. Unknowns live at the interior nodes ξ = a_j + n_j h, 1 ≤ n_j ≤ N_j;
/// storage index i_j = n_j − 1, first dimension fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub d: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub n: Vec<usize>,
    pub h: f64,
    pub delta: f64,
}

impl GridSpec {
    /// Grid with mesh size `h`; each side length must be an integer multiple of h.
    pub fn new(lower: &[f64], upper: &[f64], h: f64, delta: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return invalid(format!("mesh size h = {h} must be positive"));
        }
        let cells: Vec<f64> = lower.iter().zip(upper).map(|(a, b)| ((b - a) / h).round()).collect();
        if cells.iter().any(|&c| c < 2.0) {
            return invalid("every side must hold at least two cells");
        }
        let n = cells.iter().map(|&c| c as usize - 1).collect();
        Self::from_counts(lower, upper, n, delta).and_then(|g| {
            if ((g.h - h) / h).abs() > 1e-12 {
                return invalid(format!("box sides are not multiples of h = {h}"));
            }
            Ok(g)
        })
    }

    /// Grid with N_j interior nodes per dimension; (b_j − a_j)/(N_j + 1) must agree across j.
    pub fn from_counts(lower: &[f64], upper: &[f64], n: Vec<usize>, delta: f64) -> Result<Self> {
        let d = lower.len();
        if upper.len() != d || n.len() != d || !(1..=3).contains(&d) {
            return invalid("box bounds and counts must share a dimension in 1..=3");
        }
        if lower.iter().zip(upper).any(|(a, b)| a.is_nan() || b.is_nan() || b <= a) {
            return invalid("box must have positive side lengths");
        }
        if n.iter().any(|&nj| nj < 1) {
            return invalid("every dimension needs an interior node");
        }
        if !(delta.is_finite() && delta > 0.0) {
            return invalid(format!("horizon δ = {delta} must be positive"));
        }
        let hs: Vec<f64> = (0..d).map(|j| (upper[j] - lower[j]) / (n[j] + 1) as f64).collect();
        let h = hs[0];
        if hs.iter().any(|&hj| ((hj - h) / h).abs() > 1e-14) {
            return invalid(format!("mesh sizes differ across dimensions: {hs:?}"));
        }
        Ok(GridSpec { d, lower: lower.to_vec(), upper: upper.to_vec(), n, h, delta })
    }

    pub fn total(&self) -> usize {
        self.n.iter().product()
    }

    /// Storage index → per-dimension indices.
    pub fn index(&self, mut l: usize) -> Vec<usize> {
        self.n
            .iter()
            .map(|&nj| {
                let i = l % nj;
                l /= nj;
                i
            })
            .collect()
    }

    pub fn linear(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.n).rev().fold(0, |acc, (&i, &nj)| acc * nj + i)
    }

    /// Coordinates of the interior node with storage indices `idx`.
    pub fn node(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().zip(&self.lower).map(|(&i, &a)| a + (i + 1) as f64 * self.h).collect()
    }

    /// Nodal values of `u` in storage order.
    pub fn sample(&self, u: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        (0..self.total()).map(|l| u(&self.node(&self.index(l)))).collect()
    }

    /// Same box refined by an integer factor.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        let n = self.n.iter().map(|&nj| (nj + 1) * factor - 1).collect();
        Self::from_counts(&self.lower, &self.upper, n, self.delta)
    }

    /// Injects the values of a refined grid function at the nodes of `self`.
    pub fn restrict(&self, fine: &GridSpec, values: &[f64]) -> Result<Vec<f64>> {
        let ratio = self.h / fine.h;
        let factor = ratio.round() as usize;
        if factor == 0 || (ratio - factor as f64).abs() > 1e-9 || fine.d != self.d {
            return invalid("fine grid is not an integer refinement");
        }
        if fine.n.iter().zip(&self.n).any(|(&nf, &nc)| nf + 1 != (nc + 1) * factor) {
            return invalid("fine grid does not cover the same box");
        }
        Ok((0..self.total())
            .map(|l| {
                let idx: Vec<usize> = self.index(l).iter().map(|&i| (i + 1) * factor - 1).collect();
                values[fine.linear(&idx)]
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_nodes() {
        let g = GridSpec::new(&[-0.5, -0.5], &[0.5, 0.5], 1.0 / 16.0, 0.1).unwrap();
        assert_eq!(g.n, vec![15, 15]);
        assert_eq!(g.node(&[0, 14]), vec![-0.5 + 1.0 / 16.0, 0.5 - 1.0 / 16.0]);
        assert_eq!(g.linear(&g.index(37)), 37);
        assert!(GridSpec::new(&[0.0, 0.0], &[1.0, 1.5], 0.3, 0.1).is_err());
        assert!(GridSpec::from_counts(&[0.0, 0.0], &[1.0, 2.0], vec![3, 3], 0.1).is_err());
    }

    #[test]
    fn restriction_picks_coincident_nodes() {
        let g = GridSpec::new(&[0.0, 0.0], &[1.0, 1.0], 0.25, 0.1).unwrap();
        let f = g.refined(4).unwrap();
        let vals = f.sample(|x| x[0] + 10.0 * x[1]);
        let r = g.restrict(&f, &vals).unwrap();
        let exact = g.sample(|x| x[0] + 10.0 * x[1]);
        for (a, b) in r.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
