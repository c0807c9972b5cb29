//! Central series of U_{n+1}(Z/p^r) with elementary abelian layers.
//!
//! A nonzero entry `a` at distance `d` from the diagonal has weight
//! `d + v_p(a) * n`. The subgroup `G_w` consists of matrices whose entries all
//! have weight ≥ w; then `[G_1, G_w] ⊆ G_{w+1}` and `G_w^p ⊆ G_{w+1}`, and each
//! quotient `G_w / G_{w+1}` is an F_p-vector space spanned by the positions at
//! distance `d ≡ w (mod n)` scaled by `p^{(w-d)/n}`. For r = 1 this is the
//! lower central series γ_w.
//!
//! In quotient mode the center (the corner entry) is factored out, which
//! empties every layer at distance n.

use super::UniMatrix;
use crate::modular::ipow;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFiltration {
    dim: usize,
    p: u64,
    r: u32,
    quotient: bool,
}

/// One layer `G_w / G_{w+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub weight: usize,
    pub distance: usize,
    pub digit: u32,
    /// 0-based positions `(i, i + distance)` spanning the layer.
    pub positions: Vec<(usize, usize)>,
}

impl Layer {
    pub fn dim(&self) -> usize {
        self.positions.len()
    }
}

impl WeightFiltration {
    pub fn new(dim: usize, p: u64, r: u32, quotient: bool) -> Self {
        assert!(dim >= 2 && r >= 1);
        Self {
            dim,
            p,
            r,
            quotient,
        }
    }

    fn n(&self) -> usize {
        self.dim - 1
    }

    pub fn is_quotient(&self) -> bool {
        self.quotient
    }

    /// Weight of the last layer; states at this weight are exact homomorphisms.
    pub fn final_weight(&self) -> usize {
        let top = self.r as usize * self.n();
        if self.quotient {
            top - 1
        } else {
            top
        }
    }

    pub fn layer(&self, weight: usize) -> Layer {
        assert!(weight >= 1 && weight <= self.r as usize * self.n());
        let n = self.n();
        let distance = (weight - 1) % n + 1;
        let digit = ((weight - 1) / n) as u32;
        let positions = if self.quotient && distance == n {
            Vec::new()
        } else {
            (0..self.dim - distance)
                .map(|i| (i, i + distance))
                .collect()
        };
        Layer {
            weight,
            distance,
            digit,
            positions,
        }
    }

    /// Replaces `m` by its canonical representative modulo `G_{weight+1}`
    /// (and modulo the center in quotient mode).
    pub fn truncate(&self, m: &mut UniMatrix, weight: usize) {
        let n = self.n();
        for d in 1..self.dim {
            let keep = if weight >= d {
                ((weight - d) / n + 1).min(self.r as usize)
            } else {
                0
            };
            let modulus = ipow(self.p, keep as u32);
            for i in 0..self.dim - d {
                let v = m.get0(i, i + d);
                m.set0(i, i + d, v % modulus);
            }
        }
        if self.quotient {
            m.set0(0, self.dim - 1, 0);
        }
    }

    /// Multiplies `m` by the layer element with the given F_p coordinates.
    /// Only meaningful when the layer is central modulo the next one, which
    /// holds once `m` is truncated at the layer's weight.
    pub fn add_layer(&self, m: &mut UniMatrix, layer: &Layer, coords: &[u64]) {
        let scale = ipow(self.p, layer.digit);
        for (&(i, j), &c) in layer.positions.iter().zip(coords) {
            let v = m.get0(i, j) + c * scale;
            m.set0(i, j, v);
        }
    }

    /// F_p coordinates of an element of `G_w` in the layer `G_w / G_{w+1}`.
    pub fn layer_coords(&self, m: &UniMatrix, layer: &Layer) -> Vec<u64> {
        let scale = ipow(self.p, layer.digit);
        layer
            .positions
            .iter()
            .map(|&(i, j)| (m.get0(i, j) / scale) % self.p)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_for_mod_p_are_gamma_series() {
        let f = WeightFiltration::new(4, 3, 1, false);
        assert_eq!(f.final_weight(), 3);
        assert_eq!(f.layer(1).dim(), 3);
        assert_eq!(f.layer(2).dim(), 2);
        assert_eq!(f.layer(3).positions, vec![(0, 3)]);
        let q = WeightFiltration::new(4, 3, 1, true);
        assert_eq!(q.final_weight(), 2);
        assert!(q.layer(3).positions.is_empty());
    }

    #[test]
    fn layers_for_mod_p_squared() {
        let f = WeightFiltration::new(4, 3, 2, false);
        assert_eq!(f.final_weight(), 6);
        let l = f.layer(4);
        assert_eq!((l.distance, l.digit), (1, 1));
        // total dimension over F_p equals log_p |U_4(Z/9)| = 2 * 6
        let total: usize = (1..=6).map(|w| f.layer(w).dim()).sum();
        assert_eq!(total, 12);
    }

    #[test]
    fn truncation_is_a_homomorphism() {
        let f = WeightFiltration::new(4, 2, 2, false);
        let a = UniMatrix::from_entries(
            4,
            2,
            2,
            [(1, 2, 3), (2, 3, 1), (1, 3, 2), (3, 4, 3), (2, 4, 1)],
        )
        .unwrap();
        let b =
            UniMatrix::from_entries(4, 2, 2, [(1, 2, 1), (2, 3, 3), (1, 4, 3), (3, 4, 2)]).unwrap();
        for w in 1..=6 {
            let mut ab = a.mul(&b);
            f.truncate(&mut ab, w);
            let (mut ta, mut tb) = (a.clone(), b.clone());
            f.truncate(&mut ta, w);
            f.truncate(&mut tb, w);
            let mut prod = ta.mul(&tb);
            f.truncate(&mut prod, w);
            assert_eq!(ab, prod, "weight {w}");
        }
    }
}
