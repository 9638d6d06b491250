//! Modules over `Z/m` with a linear action of a permutation group.

use alloc::collections::VecDeque;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::linalg::{kernel, Echelon, Matrix};
use crate::perm::PermGroup;
use crate::ring::Zm;

/// Coordinates of a module element, entries reduced into `0..m`.
pub type ModVector = Vec<u8>;

/// A free `Z/m`-module of rank `dim` with `G` acting through matrices.
///
/// `action(g)` is stored for every group element, indexed like
/// `PermGroup::elements`.
#[derive(Clone, Debug)]
pub struct GModule {
    ring: Zm,
    dim: usize,
    group: Arc<PermGroup>,
    action: Vec<Matrix>,
}

impl PartialEq for GModule {
    fn eq(&self, other: &GModule) -> bool {
        self.ring == other.ring
            && self.dim == other.dim
            && (Arc::ptr_eq(&self.group, &other.group) || self.group.elements() == other.group.elements())
            && self.action == other.action
    }
}

impl GModule {
    /// One matrix per entry of `group.generators()`. The action is extended
    /// along a breadth-first spanning tree and every Cayley-graph edge is
    /// checked against it, so any relation violation is reported.
    pub fn new(group: Arc<PermGroup>, ring: Zm, dim: usize, gen_matrices: &[Matrix]) -> Result<GModule> {
        let gens = group.generators();
        if gen_matrices.len() != gens.len() {
            return Err(invalid!(
                "expected {} generator matrices, got {}",
                gens.len(),
                gen_matrices.len()
            ));
        }
        let mut mats = Vec::with_capacity(gen_matrices.len());
        for (k, a) in gen_matrices.iter().enumerate() {
            if a.rows() != dim || a.cols() != dim {
                return Err(invalid!("generator matrix {k} is not {dim}x{dim}"));
            }
            if a.as_slice().iter().any(|&x| x >= ring.modulus()) {
                return Err(invalid!("generator matrix {k} has unreduced entries"));
            }
            if !a.is_invertible(ring) {
                return Err(invalid!("generator matrix {k} is not invertible mod {}", ring.modulus()));
            }
            mats.push(a.clone());
        }
        let gen_idx: Vec<usize> = gens
            .iter()
            .map(|g| group.index_of(g).expect("generator in group"))
            .collect();
        let order = group.order();
        let mut action: Vec<Option<Matrix>> = vec![None; order];
        action[0] = Some(Matrix::identity(dim));
        for (k, &gi) in gen_idx.iter().enumerate() {
            if gi == 0 && !mats[k].is_identity() {
                return Err(invalid!("generator {k} is the identity but its matrix is not"));
            }
        }
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            let ax = action[x].clone().expect("visited");
            for (k, &s) in gen_idx.iter().enumerate() {
                let y = group.mul(x, s);
                let ay = ax.mul(&mats[k], ring);
                match &action[y] {
                    Some(existing) => {
                        if *existing != ay {
                            return Err(invalid!(
                                "generator matrices violate a relation of the group (at {})",
                                group.element(y)
                            ));
                        }
                    }
                    None => {
                        action[y] = Some(ay);
                        queue.push_back(y);
                    }
                }
            }
        }
        Ok(GModule {
            ring,
            dim,
            group,
            action: action.into_iter().map(|a| a.expect("group is generated")).collect(),
        })
    }

    /// Wraps a full action table that is multiplicative by construction.
    fn from_table(group: Arc<PermGroup>, ring: Zm, dim: usize, action: Vec<Matrix>) -> GModule {
        debug_assert_eq!(action.len(), group.order());
        GModule {
            ring,
            dim,
            group,
            action,
        }
    }

    pub fn trivial(group: Arc<PermGroup>, ring: Zm, dim: usize) -> GModule {
        let action = vec![Matrix::identity(dim); group.order()];
        GModule::from_table(group, ring, dim, action)
    }

    /// The permutation module on `points` (which must be a union of orbits);
    /// `g` sends `e_i` to `e_{g(i)}`.
    pub fn permutation(group: Arc<PermGroup>, ring: Zm, points: &[usize]) -> Result<GModule> {
        let pos = |p: usize| points.iter().position(|&q| q == p);
        let dim = points.len();
        let mut action = Vec::with_capacity(group.order());
        for g in group.elements() {
            let mut a = Matrix::zeros(dim, dim);
            for (i, &p) in points.iter().enumerate() {
                let j = pos(g.image(p)).ok_or_else(|| invalid!("points {points:?} are not invariant under {g}"))?;
                a.set(j, i, 1);
            }
            action.push(a);
        }
        Ok(GModule::from_table(group, ring, dim, action))
    }

    /// Rank one module where generator `k` acts by `scalars[k]`.
    pub fn character(group: Arc<PermGroup>, ring: Zm, scalars: &[i64]) -> Result<GModule> {
        let mats: Vec<Matrix> = scalars
            .iter()
            .map(|&s| Matrix::from_row_major(1, 1, &[s], ring))
            .collect();
        GModule::new(group, ring, 1, &mats)
    }

    #[inline]
    pub fn ring(&self) -> Zm {
        self.ring
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    #[inline]
    pub fn action(&self, g: usize) -> &Matrix {
        &self.action[g]
    }

    /// `g . v`
    pub fn act(&self, g: usize, v: &[u8]) -> ModVector {
        self.action[g].apply(v, self.ring)
    }

    /// `log_p` of the number of elements.
    pub fn log_order(&self) -> u32 {
        self.dim as u32 * self.ring.log_order()
    }

    pub fn zero(&self) -> ModVector {
        vec![0; self.dim]
    }

    /// Checks `action(gh) = action(g) action(h)` on every pair.
    pub fn verify_homomorphism(&self) -> Result<()> {
        let n = self.group.order();
        for g in 0..n {
            for h in 0..n {
                let gh = self.group.mul(g, h);
                if self.action[gh] != self.action[g].mul(&self.action[h], self.ring) {
                    return Err(invalid!("action is not multiplicative at ({g}, {h})"));
                }
            }
        }
        Ok(())
    }

    fn same_group(&self, other: &GModule) -> Result<()> {
        if self.ring != other.ring {
            return Err(invalid!(
                "coefficient rings differ: Z/{} vs Z/{}",
                self.ring.modulus(),
                other.ring.modulus()
            ));
        }
        if !Arc::ptr_eq(&self.group, &other.group) && self.group.elements() != other.group.elements() {
            return Err(invalid!("modules are over different groups"));
        }
        Ok(())
    }

    /// `M (x) N` with basis `e_i (x) f_j` at index `i * dim N + j`.
    pub fn tensor(&self, other: &GModule) -> Result<GModule> {
        self.same_group(other)?;
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.kron(b, self.ring))
            .collect();
        Ok(GModule::from_table(
            self.group.clone(),
            self.ring,
            self.dim * other.dim,
            action,
        ))
    }

    pub fn tensor_square(&self) -> GModule {
        self.tensor(self).expect("same module")
    }

    /// The quotient of `M (x) M` by a projection that is compatible with the
    /// action; acting matrices come from lifting basis vectors.
    fn quotient_of_square(&self, proj: &Matrix, lifts: &[(usize, usize)]) -> GModule {
        let d = self.dim;
        let q = proj.rows();
        let action = self
            .action
            .iter()
            .map(|a| {
                let mut out = Matrix::zeros(q, q);
                for (col, &(i, j)) in lifts.iter().enumerate() {
                    // g(e_i (x) e_j) = (g e_i) (x) (g e_j)
                    let mut t = vec![0u8; d * d];
                    for k in 0..d {
                        let aki = a.get(k, i);
                        if aki == 0 {
                            continue;
                        }
                        for l in 0..d {
                            t[k * d + l] = self.ring.add(t[k * d + l], self.ring.mul(aki, a.get(l, j)));
                        }
                    }
                    let img = proj.apply(&t, self.ring);
                    for (row, &x) in img.iter().enumerate() {
                        out.set(row, col, x);
                    }
                }
                out
            })
            .collect();
        GModule::from_table(self.group.clone(), self.ring, q, action)
    }

    /// `S^2 M`, the quotient of `M (x) M` by `x (x) y - y (x) x`, with basis
    /// `e_i e_j` (`i <= j`, lexicographic), and the projection from `M (x) M`.
    pub fn sym_square(&self) -> (GModule, Matrix) {
        let d = self.dim;
        let lifts: Vec<(usize, usize)> = (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).collect();
        let mut proj = Matrix::zeros(lifts.len(), d * d);
        for i in 0..d {
            for j in 0..d {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                let row = lifts.iter().position(|&p| p == (a, b)).expect("pair listed");
                proj.set(row, i * d + j, 1);
            }
        }
        (self.quotient_of_square(&proj, &lifts), proj)
    }

    /// `/\^2 M`, the quotient of `M (x) M` by `x (x) x`; only for `m = 2`,
    /// where `e_j (x) e_i` and `e_i (x) e_j` have the same image.
    pub fn wedge_square(&self) -> Result<(GModule, Matrix)> {
        if self.ring.modulus() != 2 {
            return Err(Error::Unsupported(alloc::format!(
                "exterior square is only modeled for m = 2, got m = {}",
                self.ring.modulus()
            )));
        }
        let d = self.dim;
        let lifts: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
        let mut proj = Matrix::zeros(lifts.len(), d * d);
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                let row = lifts.iter().position(|&p| p == (a, b)).expect("pair listed");
                proj.set(row, i * d + j, 1);
            }
        }
        Ok((self.quotient_of_square(&proj, &lifts), proj))
    }

    /// The contragredient module: `g` acts by `action(g^{-1})^T`.
    pub fn dual(&self) -> GModule {
        let action = (0..self.group.order())
            .map(|g| self.action[self.group.inv(g)].transpose())
            .collect();
        GModule::from_table(self.group.clone(), self.ring, self.dim, action)
    }

    /// `Hom(M, N)` as `dual(M) (x) N`: coordinate `i * dim N + j` is the
    /// `f_j`-component of `phi(e_i)`.
    pub fn hom_module(&self, target: &GModule) -> Result<GModule> {
        self.dual().tensor(target)
    }

    /// Generators of the fixed submodule of the listed group elements
    /// (a basis over a field).
    pub fn invariants_of(&self, elements: &[usize]) -> Vec<ModVector> {
        let d = self.dim;
        let mut rows = Vec::new();
        for &h in elements {
            let a = self.action[h].sub_identity(self.ring);
            for i in 0..d {
                rows.push(a.row(i).to_vec());
            }
        }
        let gens = kernel(self.ring, d, &rows);
        let mut ech = Echelon::new(self.ring, d);
        for g in &gens {
            ech.insert(g);
        }
        if self.ring.is_field() {
            return ech_basis(&ech);
        }
        gens
    }

    /// Fixed vectors of a subgroup given as a permutation group contained in
    /// the acting group.
    pub fn invariants(&self, sub: &PermGroup) -> Result<Vec<ModVector>> {
        let idx = self.embed_generators(sub)?;
        Ok(self.invariants_of(&idx))
    }

    /// `log_p |M^H|` for the listed generators of `H`.
    pub fn invariants_log_order(&self, elements: &[usize]) -> u32 {
        let mut ech = Echelon::new(self.ring, self.dim);
        for v in self.invariants_of(elements) {
            ech.insert(&v);
        }
        ech.log_order()
    }

    /// `(log_p |M^<g>|, log_p |dual(M)^<g>|)`; equal whenever everything is
    /// computed correctly (a matrix and its transpose have equal rank).
    pub fn cyclic_rank_check(&self, g: usize) -> (u32, u32) {
        let dual = self.dual();
        (self.invariants_log_order(&[g]), dual.invariants_log_order(&[g]))
    }

    fn embed_generators(&self, sub: &PermGroup) -> Result<Vec<usize>> {
        sub.generators()
            .iter()
            .map(|g| {
                self.group
                    .index_of(g)
                    .ok_or_else(|| invalid!("{g} does not lie in the acting group"))
            })
            .collect()
    }

    /// The same matrices viewed as a module over a subgroup.
    pub fn restrict(&self, sub: &Arc<PermGroup>) -> Result<GModule> {
        if sub.degree() != self.group.degree() {
            return Err(invalid!("subgroup acts on a different number of points"));
        }
        let mut action = Vec::with_capacity(sub.order());
        for h in sub.elements() {
            let i = self
                .group
                .index_of(h)
                .ok_or_else(|| invalid!("{h} does not lie in the acting group"))?;
            action.push(self.action[i].clone());
        }
        Ok(GModule::from_table(sub.clone(), self.ring, self.dim, action))
    }

    /// Index in `self.group()` of each element of `sub`.
    pub fn element_map(&self, sub: &PermGroup) -> Result<Vec<usize>> {
        sub.elements()
            .iter()
            .map(|h| {
                self.group
                    .index_of(h)
                    .ok_or_else(|| invalid!("{h} does not lie in the acting group"))
            })
            .collect()
    }

    /// Whether `map: self -> target` commutes with every generator.
    pub fn is_equivariant(&self, target: &GModule, map: &Matrix) -> bool {
        self.group.generator_indices().iter().all(|&s| {
            map.mul(&self.action[s], self.ring) == target.action[s].mul(map, self.ring)
        })
    }
}

fn ech_basis(ech: &Echelon) -> Vec<ModVector> {
    ech.rows_from(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{group_closure, Perm};

    fn group(n: usize, gens: &[&str]) -> Arc<PermGroup> {
        let gens: Vec<Perm> = gens.iter().map(|g| Perm::parse_cycles(g, n).unwrap()).collect();
        Arc::new(group_closure(n, &gens).unwrap())
    }

    fn swap_module(g: &Arc<PermGroup>) -> GModule {
        GModule::permutation(g.clone(), Zm::F2, &[0, 1]).unwrap()
    }

    #[test]
    fn relation_violation_is_rejected() {
        let z2 = group(2, &["(1 2)"]);
        let bad = Matrix::from_row_major(1, 1, &[2], Zm::new(5).unwrap());
        assert!(GModule::new(z2, Zm::new(5).unwrap(), 1, &[bad]).is_err());
    }

    #[test]
    fn non_invertible_is_rejected() {
        let z2 = group(2, &["(1 2)"]);
        let bad = Matrix::from_row_major(2, 2, &[1, 1, 1, 1], Zm::F2);
        assert!(GModule::new(z2, Zm::F2, 2, &[bad]).is_err());
    }

    #[test]
    fn square_dimensions() {
        let g = group(4, &["(1 2 3 4)"]);
        let m = GModule::trivial(g, Zm::F2, 4);
        assert_eq!(m.tensor_square().dim(), 16);
        assert_eq!(m.sym_square().0.dim(), 10);
        assert_eq!(m.wedge_square().unwrap().0.dim(), 6);
        let one = GModule::trivial(group(2, &["(1 2)"]), Zm::F2, 1);
        assert_eq!(one.wedge_square().unwrap().0.dim(), 0);
        let f3 = GModule::trivial(group(2, &["(1 2)"]), Zm::new(3).unwrap(), 2);
        assert!(matches!(f3.wedge_square(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn swap_wedge_is_trivial() {
        let z2 = group(2, &["(1 2)"]);
        let m = swap_module(&z2);
        let (w, _) = m.wedge_square().unwrap();
        assert_eq!(w.dim(), 1);
        assert!(w.action(1).is_identity());
    }

    #[test]
    fn squares_are_modules() {
        let s3 = group(3, &["(1 2 3)", "(1 2)"]);
        let m = GModule::permutation(s3, Zm::F2, &[0, 1, 2]).unwrap();
        m.tensor_square().verify_homomorphism().unwrap();
        m.sym_square().0.verify_homomorphism().unwrap();
        m.wedge_square().unwrap().0.verify_homomorphism().unwrap();
        m.dual().verify_homomorphism().unwrap();
    }

    #[test]
    fn duals() {
        let z2 = group(2, &["(1 2)"]);
        let m = swap_module(&z2);
        assert_eq!(m.dual(), m);
        let t = GModule::trivial(z2.clone(), Zm::F2, 1);
        assert_eq!(m.hom_module(&t).unwrap(), m.dual());
    }

    #[test]
    fn fixed_spaces() {
        let z2 = group(2, &["(1 2)"]);
        let m = swap_module(&z2);
        assert_eq!(m.invariants(&z2).unwrap(), vec![vec![1, 1]]);
        let trivial = PermGroup::trivial(2);
        assert_eq!(m.invariants(&trivial).unwrap().len(), 2);
        let s3 = group(3, &["(1 2 3)", "(1 2)"]);
        let p = GModule::permutation(s3.clone(), Zm::F2, &[0, 1, 2]).unwrap();
        assert_eq!(p.invariants(&s3).unwrap(), vec![vec![1, 1, 1]]);
        assert_eq!(m.cyclic_rank_check(1), (1, 1));
        assert_eq!(m.cyclic_rank_check(0), (2, 2));
    }

    #[test]
    fn restriction() {
        let s3 = group(3, &["(1 2 3)", "(1 2)"]);
        let p = GModule::permutation(s3.clone(), Zm::F2, &[0, 1, 2]).unwrap();
        assert_eq!(p.restrict(&s3).unwrap(), p);
        let triv = Arc::new(PermGroup::trivial(3));
        let r = p.restrict(&triv).unwrap();
        assert_eq!(r.group().order(), 1);
        assert!(r.action(0).is_identity());
    }
}
