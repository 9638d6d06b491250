//! Normalized bar-resolution cochains and low-degree cohomology.
//!
//! A `k`-cochain stores one module vector per `k`-tuple of non-identity
//! group elements; tuples containing the identity evaluate to zero. Slot
//! order is lexicographic in the element indices of the tuple.
//!
//! Cocycle spaces are not computed from the full bar complex. A 1-cocycle is
//! determined by its values on the generators, and a 2-cocycle by its values
//! on the Cayley-graph edges `(h, s)`; after subtracting a suitable coboundary
//! it also vanishes on the edges of a fixed breadth-first spanning tree.
//! Both reductions keep the linear systems proportional to `|G|` instead of
//! `|G|^2`.

use alloc::collections::BTreeSet;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::gmodule::{GModule, ModVector};
use crate::linalg::{kernel_of, Echelon, Matrix, SpanSolver};
use crate::perm::PermGroup;
use crate::ring::Zm;

/// Seed for pseudorandom class sampling.
pub const DEFAULT_SEED: u64 = 0xC0C0;

/// A normalized cochain of degree `k` with values in a module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    order: usize,
    dim: usize,
    ring: Zm,
    values: Vec<u8>,
    zero: Vec<u8>,
}

impl Cochain {
    pub fn zero(module: &GModule, degree: usize) -> Cochain {
        Cochain::zero_raw(module.group().order(), module.dim(), module.ring(), degree)
    }

    fn zero_raw(order: usize, dim: usize, ring: Zm, degree: usize) -> Cochain {
        let slots = (order - 1).pow(degree as u32);
        Cochain {
            degree,
            order,
            dim,
            ring,
            values: vec![0; slots * dim],
            zero: vec![0; dim],
        }
    }

    /// Cochain with `f(args)` at each tuple of non-identity elements.
    pub fn from_fn<F>(module: &GModule, degree: usize, mut f: F) -> Cochain
    where
        F: FnMut(&[usize]) -> ModVector,
    {
        let mut c = Cochain::zero(module, degree);
        let mut args = vec![1usize; degree];
        for slot in 0..c.slots() {
            let v = f(&args);
            c.values[slot * c.dim..(slot + 1) * c.dim].copy_from_slice(&v);
            c.advance(&mut args);
        }
        c
    }

    fn advance(&self, args: &mut [usize]) {
        for a in args.iter_mut().rev() {
            *a += 1;
            if *a < self.order {
                return;
            }
            *a = 1;
        }
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn ring(&self) -> Zm {
        self.ring
    }

    #[inline]
    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn slots(&self) -> usize {
        (self.order - 1).pow(self.degree as u32)
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    #[inline]
    fn slot(&self, args: &[usize]) -> Option<usize> {
        debug_assert_eq!(args.len(), self.degree);
        let mut s = 0;
        for &a in args {
            if a == 0 {
                return None;
            }
            s = s * (self.order - 1) + (a - 1);
        }
        Some(s)
    }

    /// Value at a tuple of element indices (zero if any entry is the identity).
    #[inline]
    pub fn get(&self, args: &[usize]) -> &[u8] {
        match self.slot(args) {
            Some(s) => &self.values[s * self.dim..(s + 1) * self.dim],
            None => &self.zero,
        }
    }

    /// Panics when `args` contains the identity.
    pub fn set(&mut self, args: &[usize], v: &[u8]) {
        let s = self.slot(args).expect("normalized cochains vanish at the identity");
        self.values[s * self.dim..(s + 1) * self.dim].copy_from_slice(v);
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&x| x == 0)
    }

    fn check_shape(&self, other: &Cochain) {
        assert_eq!(
            (self.degree, self.order, self.dim, self.ring),
            (other.degree, other.order, other.dim, other.ring),
            "cochain shapes differ"
        );
    }

    pub fn add(&self, other: &Cochain) -> Cochain {
        self.check_shape(other);
        let mut out = self.clone();
        self.ring.add_assign_slice(&mut out.values, &other.values);
        out
    }

    pub fn sub(&self, other: &Cochain) -> Cochain {
        self.check_shape(other);
        let mut out = self.clone();
        self.ring.sub_assign_slice(&mut out.values, &other.values);
        out
    }

    pub fn neg(&self) -> Cochain {
        let mut out = self.clone();
        for x in out.values.iter_mut() {
            *x = self.ring.neg(*x);
        }
        out
    }

    pub fn scale(&self, c: u8) -> Cochain {
        let mut out = self.clone();
        self.ring.scale(&mut out.values, c);
        out
    }

    /// Applies a module map (`target_dim x dim` matrix over the same ring)
    /// to every value.
    pub fn pushforward(&self, map: &Matrix) -> Cochain {
        assert_eq!(map.cols(), self.dim, "map does not start at the value module");
        let mut out = Cochain::zero_raw(self.order, map.rows(), self.ring, self.degree);
        for s in 0..self.slots() {
            let v = &self.values[s * self.dim..(s + 1) * self.dim];
            map.apply_into(v, &mut out.values[s * map.rows()..(s + 1) * map.rows()], self.ring);
        }
        out
    }

    /// Values restricted to tuples from a subgroup; `map[i]` is the index in
    /// the ambient group of element `i` of the subgroup.
    pub fn restrict(&self, map: &[usize]) -> Cochain {
        let mut out = Cochain::zero_raw(map.len(), self.dim, self.ring, self.degree);
        let mut args = vec![1usize; self.degree];
        let mut ambient = vec![0usize; self.degree];
        for s in 0..out.slots() {
            for (a, &i) in ambient.iter_mut().zip(&args) {
                *a = map[i];
            }
            out.values[s * self.dim..(s + 1) * self.dim].copy_from_slice(self.get(&ambient));
            out.advance(&mut args);
        }
        out
    }
}

fn check_module(module: &GModule, c: &Cochain) -> Result<()> {
    if c.order != module.group().order() || c.dim != module.dim() || c.ring != module.ring() {
        return Err(invalid!("cochain does not belong to the given module"));
    }
    Ok(())
}

/// The bar differential `(dc)(g_1..g_{k+1}) = g_1 c(g_2..) + sum (-1)^i
/// c(.., g_i g_{i+1}, ..) + (-1)^{k+1} c(g_1..g_k)`.
pub fn coboundary(module: &GModule, c: &Cochain) -> Result<Cochain> {
    check_module(module, c)?;
    if c.degree > 2 {
        return Err(Error::Unsupported(alloc::format!(
            "coboundary of a degree {} cochain",
            c.degree
        )));
    }
    let ring = module.ring();
    let group = module.group().clone();
    let k = c.degree;
    let mut inner = vec![0usize; k];
    Ok(Cochain::from_fn(module, k + 1, |args| {
        let mut acc = module.act(args[0], c.get(&args[1..]));
        for i in 1..=k {
            inner[..i - 1].copy_from_slice(&args[..i - 1]);
            inner[i - 1] = group.mul(args[i - 1], args[i]);
            inner[i..].copy_from_slice(&args[i + 1..]);
            if i % 2 == 1 {
                ring.sub_assign_slice(&mut acc, c.get(&inner));
            } else {
                ring.add_assign_slice(&mut acc, c.get(&inner));
            }
        }
        if (k + 1) % 2 == 1 {
            ring.sub_assign_slice(&mut acc, c.get(&args[..k]));
        } else {
            ring.add_assign_slice(&mut acc, c.get(&args[..k]));
        }
        acc
    }))
}

/// Whether a 1-cochain satisfies `c(gh) = c(g) + g c(h)`.
pub fn is_cocycle1(module: &GModule, c: &Cochain) -> bool {
    if check_module(module, c).is_err() || c.degree != 1 {
        return false;
    }
    let group = module.group();
    let ring = module.ring();
    let n = group.order();
    for g in 1..n {
        let a = module.action(g);
        for h in 1..n {
            let mut v = a.apply(c.get(&[h]), ring);
            ring.add_assign_slice(&mut v, c.get(&[g]));
            if v != c.get(&[group.mul(g, h)]) {
                return false;
            }
        }
    }
    true
}

/// Whether `d c = 0` (any degree up to 2).
pub fn is_cocycle(module: &GModule, c: &Cochain) -> Result<bool> {
    if c.degree == 1 {
        check_module(module, c)?;
        return Ok(is_cocycle1(module, c));
    }
    Ok(coboundary(module, c)?.is_zero())
}

/// How the second factor of a cup product is twisted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CupConvention {
    /// `(a u b)(g, h) = a(g) (x) g.b(h)`
    #[default]
    Standard,
    /// `a(g) (x) b(h)`; not a cocycle in general, kept as a negative control.
    IgnoreAction,
}

/// Cup product of 1-cocycles, valued in `M (x) N` (index `i * dim N + j`).
pub fn cup11(m: &GModule, a: &Cochain, n: &GModule, b: &Cochain) -> Result<Cochain> {
    cup11_with(CupConvention::Standard, m, a, n, b)
}

pub fn cup11_with(
    convention: CupConvention,
    m: &GModule,
    a: &Cochain,
    n: &GModule,
    b: &Cochain,
) -> Result<Cochain> {
    if !is_cocycle1(m, a) || !is_cocycle1(n, b) {
        return Err(invalid!("cup product inputs must be 1-cocycles"));
    }
    let mn = m.tensor(n)?;
    Ok(cup11_unchecked(convention, &mn, a, n, b))
}

pub(crate) fn cup11_unchecked(
    convention: CupConvention,
    mn: &GModule,
    a: &Cochain,
    n: &GModule,
    b: &Cochain,
) -> Cochain {
    let ring = mn.ring();
    let dn = n.dim();
    Cochain::from_fn(mn, 2, |args| {
        let left = a.get(&args[..1]);
        let right = match convention {
            CupConvention::Standard => n.act(args[0], b.get(&args[1..])),
            CupConvention::IgnoreAction => b.get(&args[1..]).to_vec(),
        };
        let mut out = vec![0u8; left.len() * dn];
        for (i, &x) in left.iter().enumerate() {
            ring.axpy(&mut out[i * dn..(i + 1) * dn], x, &right);
        }
        out
    })
}

/// Options for class enumeration.
#[derive(Clone, Copy, Debug)]
pub struct CohomologyOptions {
    /// Largest group order for which `H^2` is computed.
    pub h2_cap: usize,
    /// Classes are listed exhaustively when `|H| <= exhaustive_limit`.
    pub exhaustive_limit: usize,
    /// Number of sampled classes otherwise.
    pub sample_count: usize,
    pub seed: u64,
}

impl Default for CohomologyOptions {
    fn default() -> Self {
        CohomologyOptions {
            h2_cap: 200,
            exhaustive_limit: 1 << 12,
            sample_count: 64,
            seed: DEFAULT_SEED,
        }
    }
}

/// Sizes of cocycles, coboundaries and cohomology as `log_p` of orders
/// (dimensions over a prime field), with class representatives.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    pub degree: usize,
    pub log_z: u32,
    pub log_b: u32,
    pub log_h: u32,
    pub classes: Vec<Cochain>,
    /// Whether `classes` lists every class (otherwise a seeded sample).
    pub exhaustive: bool,
}

pub fn cohomology_space(module: &GModule, degree: usize, opts: &CohomologyOptions) -> Result<CohomologySpace> {
    match degree {
        1 => Ok(H1::new(module).space(opts)),
        2 => H2::new(module).space(opts),
        _ => Err(Error::Unsupported(alloc::format!("H^{degree} is not computed"))),
    }
}

/// Canonical representatives of `span(z_gens) / B`.
fn enumerate_quotient(
    ring: Zm,
    len: usize,
    z_gens: &[Vec<u8>],
    b: &Echelon,
    log_h: u32,
    opts: &CohomologyOptions,
) -> (Vec<Vec<u8>>, bool) {
    let size = (ring.prime() as u128).checked_pow(log_h);
    let exhaustive = size.is_some_and(|s| s <= opts.exhaustive_limit as u128);
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut out = Vec::new();
    let zero = vec![0u8; len];
    seen.insert(zero.clone());
    out.push(zero);
    if exhaustive {
        let mut head = 0;
        while head < out.len() {
            let base = out[head].clone();
            head += 1;
            for z in z_gens {
                let mut v = base.clone();
                ring.add_assign_slice(&mut v, z);
                b.reduce(&mut v);
                if seen.insert(v.clone()) {
                    out.push(v);
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut attempts = 0;
        while out.len() < opts.sample_count && attempts < opts.sample_count * 16 {
            attempts += 1;
            let mut v = vec![0u8; len];
            for z in z_gens {
                let c = rng.gen_range(0..ring.modulus());
                ring.axpy(&mut v, c, z);
            }
            b.reduce(&mut v);
            if seen.insert(v.clone()) {
                out.push(v);
            }
        }
    }
    (out, exhaustive)
}

/// Breadth-first spanning tree of the right Cayley graph.
#[derive(Clone, Debug)]
struct CayleyTree {
    gens: Vec<usize>,
    /// `(parent, generator slot, child)` in discovery order.
    edges: Vec<(usize, usize, usize)>,
    /// `is_tree[h * r + k]` for the edge `h -> h s_k`.
    is_tree: Vec<bool>,
}

impl CayleyTree {
    fn new(group: &PermGroup) -> CayleyTree {
        let gens = group.generator_indices().to_vec();
        let r = gens.len();
        let n = group.order();
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        let mut is_tree = vec![false; n * r];
        let mut queue = alloc::collections::VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (k, &s) in gens.iter().enumerate() {
                let y = group.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    edges.push((x, k, y));
                    is_tree[x * r + k] = true;
                    queue.push_back(y);
                }
            }
        }
        CayleyTree { gens, edges, is_tree }
    }
}

/// Degree-one cohomology in generator coordinates: a 1-cocycle is recorded
/// by its values `zeta(s_1), .., zeta(s_r)` (length `r * dim`).
#[derive(Clone, Debug)]
pub struct H1 {
    module: GModule,
    tree: CayleyTree,
    z_gens: Vec<Vec<u8>>,
    log_z: u32,
    b_vectors: Vec<Vec<u8>>,
    b_ech: Echelon,
    b_solver: SpanSolver,
}

impl H1 {
    pub fn new(module: &GModule) -> H1 {
        let group = module.group();
        let ring = module.ring();
        let d = module.dim();
        let tree = CayleyTree::new(group);
        let r = tree.gens.len();
        let width = r * d;
        // zeta(x) as a d x width matrix in the unknowns
        let mut sym: Vec<Option<Matrix>> = vec![None; group.order()];
        sym[0] = Some(Matrix::zeros(d, width));
        let mut constraints = Echelon::new(ring, width);
        let step = |x: usize, k: usize, lx: &Matrix| {
            let mut m = lx.clone();
            let a = module.action(x);
            for i in 0..d {
                for j in 0..d {
                    let v = ring.add(m.get(i, k * d + j), a.get(i, j));
                    m.set(i, k * d + j, v);
                }
            }
            m
        };
        for &(x, k, y) in &tree.edges {
            let lx = sym[x].clone().expect("parent visited");
            sym[y] = Some(step(x, k, &lx));
        }
        for x in 0..group.order() {
            let lx = sym[x].as_ref().expect("all visited");
            for (k, &s) in tree.gens.iter().enumerate() {
                if tree.is_tree[x * r + k] {
                    continue;
                }
                let y = group.mul(x, s);
                let cand = step(x, k, lx);
                let ly = sym[y].as_ref().expect("all visited");
                for i in 0..d {
                    let mut row = cand.row(i).to_vec();
                    ring.sub_assign_slice(&mut row, ly.row(i));
                    constraints.insert(&row);
                }
            }
        }
        let z_gens = kernel_of(&constraints);
        let mut z_ech = Echelon::new(ring, width);
        for z in &z_gens {
            z_ech.insert(z);
        }
        let b_vectors: Vec<Vec<u8>> = (0..d)
            .map(|i| {
                let mut e = vec![0u8; d];
                e[i] = 1;
                let mut v = Vec::with_capacity(width);
                for &s in &tree.gens {
                    let mut w = module.act(s, &e);
                    ring.sub_assign_slice(&mut w, &e);
                    v.extend(w);
                }
                v
            })
            .collect();
        let mut b_ech = Echelon::new(ring, width);
        for v in &b_vectors {
            b_ech.insert(v);
        }
        let b_solver = SpanSolver::new(ring, width, b_vectors.iter().cloned());
        H1 {
            module: module.clone(),
            tree,
            z_gens,
            log_z: z_ech.log_order(),
            b_vectors,
            b_ech,
            b_solver,
        }
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn log_z(&self) -> u32 {
        self.log_z
    }

    pub fn log_b(&self) -> u32 {
        self.b_ech.log_order()
    }

    pub fn log_h(&self) -> u32 {
        self.log_z - self.log_b()
    }

    /// Generator coordinates of a 1-cochain.
    pub fn coords(&self, c: &Cochain) -> Vec<u8> {
        self.tree.gens.iter().flat_map(|&s| c.get(&[s]).to_vec()).collect()
    }

    /// The 1-cochain with the given generator values, propagated by the
    /// cocycle rule `zeta(x s) = zeta(x) + x zeta(s)`. It is a cocycle iff
    /// the coordinates lie in `Z^1`.
    pub fn expand(&self, coords: &[u8]) -> Cochain {
        let d = self.module.dim();
        let ring = self.module.ring();
        let n = self.module.group().order();
        let mut vals: Vec<ModVector> = vec![vec![0; d]; n];
        for &(x, k, y) in &self.tree.edges {
            let mut v = vals[x].clone();
            self.module.action(x).apply_add(&coords[k * d..(k + 1) * d], &mut v, ring);
            vals[y] = v;
        }
        Cochain::from_fn(&self.module, 1, |args| vals[args[0]].clone())
    }

    pub fn space(&self, opts: &CohomologyOptions) -> CohomologySpace {
        let width = self.tree.gens.len() * self.module.dim();
        let (reps, exhaustive) = enumerate_quotient(
            self.module.ring(),
            width,
            &self.z_gens,
            &self.b_ech,
            self.log_h(),
            opts,
        );
        CohomologySpace {
            degree: 1,
            log_z: self.log_z,
            log_b: self.log_b(),
            log_h: self.log_h(),
            classes: reps.iter().map(|c| self.expand(c)).collect(),
            exhaustive,
        }
    }

    /// A vector `v` with `c = dv`, verified on every group element.
    pub fn coboundary_witness(&self, c: &Cochain) -> Option<ModVector> {
        if check_module(&self.module, c).is_err() || c.degree != 1 {
            return None;
        }
        let v = self.b_solver.solve(&self.coords(c))?;
        let ring = self.module.ring();
        for g in 1..self.module.group().order() {
            let mut w = self.module.act(g, &v);
            ring.sub_assign_slice(&mut w, &v);
            if w != c.get(&[g]) {
                return None;
            }
        }
        Some(v)
    }

    pub fn is_coboundary(&self, c: &Cochain) -> bool {
        self.coboundary_witness(c).is_some()
    }

    /// A vector `v` with `c - c' = dv`.
    pub fn cohomologous(&self, c: &Cochain, c2: &Cochain) -> Option<ModVector> {
        self.coboundary_witness(&c.sub(c2))
    }

    /// Coordinates of the coboundaries `d e_i`.
    pub fn coboundary_generators(&self) -> &[Vec<u8>] {
        &self.b_vectors
    }
}

/// Degree-two cohomology relative to a Cayley-graph spanning tree.
///
/// Every 2-cocycle is cohomologous to one vanishing on the tree edges
/// `(h, s)`; such a cocycle is determined by its values on the remaining
/// edges, and the 2-cocycle identity with last argument a generator
/// propagates it to all pairs.
#[derive(Clone, Debug)]
pub struct H2 {
    module: GModule,
    tree: CayleyTree,
    /// Ordinal of each non-tree edge `h * r + k`, or `usize::MAX`.
    edge_slot: Vec<usize>,
    free_edges: Vec<(usize, usize)>,
    /// `u(x)` for tree-propagated 1-cochains, as `d x (r d)` matrices.
    u_sym: Vec<Matrix>,
    b_vectors: Vec<Vec<u8>>,
    b_solver: SpanSolver,
}

impl H2 {
    pub fn new(module: &GModule) -> H2 {
        let group = module.group();
        let ring = module.ring();
        let d = module.dim();
        let n = group.order();
        let tree = CayleyTree::new(group);
        let r = tree.gens.len();
        let mut edge_slot = vec![usize::MAX; n * r];
        let mut free_edges = Vec::new();
        for h in 1..n {
            for k in 0..r {
                if !tree.is_tree[h * r + k] {
                    edge_slot[h * r + k] = free_edges.len();
                    free_edges.push((h, k));
                }
            }
        }
        let width = r * d;
        let mut u_sym = vec![Matrix::zeros(d, width); n];
        for &(x, k, y) in &tree.edges {
            let mut m = u_sym[x].clone();
            let a = module.action(x);
            for i in 0..d {
                for j in 0..d {
                    let v = ring.add(m.get(i, k * d + j), a.get(i, j));
                    m.set(i, k * d + j, v);
                }
            }
            u_sym[y] = m;
        }
        // du on a free edge (h, k): h u(s_k) - u(h s_k) + u(h)
        let len = free_edges.len() * d;
        let mut cols = vec![vec![0u8; len]; width];
        for (t, &(h, k)) in free_edges.iter().enumerate() {
            let y = group.mul(h, tree.gens[k]);
            let a = module.action(h);
            for i in 0..d {
                for (j, col) in cols.iter_mut().enumerate() {
                    let mut v = ring.add(u_sym[h].get(i, j), ring.neg(u_sym[y].get(i, j)));
                    if j / d == k {
                        v = ring.add(v, a.get(i, j % d));
                    }
                    col[t * d + i] = v;
                }
            }
        }
        let b_solver = SpanSolver::new(ring, len, cols.iter().cloned());
        H2 {
            module: module.clone(),
            tree,
            edge_slot,
            free_edges,
            u_sym,
            b_vectors: cols,
            b_solver,
        }
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    fn r(&self) -> usize {
        self.tree.gens.len()
    }

    /// The tree-propagated 1-cochain with `u(s_k) = params[k]`.
    fn u_from_params(&self, params: &[u8]) -> Cochain {
        let ring = self.module.ring();
        Cochain::from_fn(&self.module, 1, |args| self.u_sym[args[0]].apply(params, ring))
    }

    /// `c - du0` vanishing on tree edges, together with `u0`.
    fn tree_normalize(&self, c: &Cochain) -> Result<(Cochain, Cochain)> {
        let ring = self.module.ring();
        let d = self.module.dim();
        let n = self.module.group().order();
        let mut u0: Vec<ModVector> = vec![vec![0; d]; n];
        for &(h, k, y) in &self.tree.edges {
            if h == 0 {
                continue;
            }
            let mut v = u0[h].clone();
            ring.sub_assign_slice(&mut v, c.get(&[h, self.tree.gens[k]]));
            u0[y] = v;
        }
        let u0 = Cochain::from_fn(&self.module, 1, |args| u0[args[0]].clone());
        let du0 = coboundary(&self.module, &u0)?;
        Ok((c.sub(&du0), u0))
    }

    fn free_coords(&self, c: &Cochain) -> Vec<u8> {
        self.free_edges
            .iter()
            .flat_map(|&(h, k)| c.get(&[h, self.tree.gens[k]]).to_vec())
            .collect()
    }

    /// A 1-cochain `u` with `du = c`, verified on all pairs.
    pub fn coboundary_witness(&self, c: &Cochain) -> Option<Cochain> {
        if check_module(&self.module, c).is_err() || c.degree != 2 {
            return None;
        }
        let (normal, u0) = self.tree_normalize(c).ok()?;
        let params = self.b_solver.solve(&self.free_coords(&normal))?;
        let u = u0.add(&self.u_from_params(&params));
        let du = coboundary(&self.module, &u).ok()?;
        (du == *c).then_some(u)
    }

    pub fn is_coboundary(&self, c: &Cochain) -> bool {
        self.coboundary_witness(c).is_some()
    }

    /// A 1-cochain `u` with `du = c - c'`.
    pub fn cohomologous(&self, c: &Cochain, c2: &Cochain) -> Option<Cochain> {
        self.coboundary_witness(&c.sub(c2))
    }

    /// The 2-cochain vanishing on tree edges with the given values on the
    /// free edges (cocycle iff the coordinates solve the constraints).
    pub fn expand(&self, coords: &[u8]) -> Cochain {
        let ring = self.module.ring();
        let d = self.module.dim();
        let group = self.module.group().clone();
        let n = group.order();
        let r = self.r();
        let zero = vec![0u8; d];
        let ev = |x: usize, k: usize| -> &[u8] {
            match self.edge_slot[x * r + k] {
                usize::MAX => &zero,
                t => &coords[t * d..(t + 1) * d],
            }
        };
        let mut table: Vec<ModVector> = vec![vec![0; d]; n * n];
        for g in 1..n {
            let a = self.module.action(g);
            for &(h, k, y) in &self.tree.edges {
                let mut v = table[g * n + h].clone();
                ring.add_assign_slice(&mut v, ev(group.mul(g, h), k));
                let t = a.apply(ev(h, k), ring);
                ring.sub_assign_slice(&mut v, &t);
                table[g * n + y] = v;
            }
        }
        Cochain::from_fn(&self.module, 2, |args| table[args[0] * n + args[1]].clone())
    }

    pub fn space(&self, opts: &CohomologyOptions) -> Result<CohomologySpace> {
        let group = self.module.group().clone();
        let n = group.order();
        if n > opts.h2_cap {
            return Err(Error::TooLarge {
                what: "group order for H^2",
                actual: n,
                cap: opts.h2_cap,
            });
        }
        let ring = self.module.ring();
        let d = self.module.dim();
        let r = self.r();
        let width = self.free_edges.len() * d;
        let sel = |x: usize, k: usize| -> Option<usize> {
            match self.edge_slot[x * r + k] {
                usize::MAX => None,
                t => Some(t * d),
            }
        };
        let mut constraints = Echelon::new(ring, width);
        for g in 1..n {
            let a = self.module.action(g);
            // expression of f(g, h) in the free unknowns
            let mut expr: Vec<Option<Matrix>> = vec![None; n];
            expr[0] = Some(Matrix::zeros(d, width));
            let edge_expr = |base: &Matrix, h: usize, k: usize| -> Matrix {
                let mut m = base.clone();
                if let Some(off) = sel(group.mul(g, h), k) {
                    for i in 0..d {
                        let v = ring.add(m.get(i, off + i), 1);
                        m.set(i, off + i, v);
                    }
                }
                if let Some(off) = sel(h, k) {
                    for i in 0..d {
                        for j in 0..d {
                            let v = ring.sub(m.get(i, off + j), a.get(i, j));
                            m.set(i, off + j, v);
                        }
                    }
                }
                m
            };
            for &(h, k, y) in &self.tree.edges {
                let base = expr[h].as_ref().expect("parent visited");
                expr[y] = Some(edge_expr(base, h, k));
            }
            for &(h, k) in &self.free_edges {
                let y = group.mul(h, self.tree.gens[k]);
                let cand = edge_expr(expr[h].as_ref().expect("visited"), h, k);
                let target = expr[y].as_ref().expect("visited");
                for i in 0..d {
                    let mut row = cand.row(i).to_vec();
                    ring.sub_assign_slice(&mut row, target.row(i));
                    if row.iter().any(|&x| x != 0) {
                        constraints.insert(&row);
                    }
                }
            }
        }
        let z_gens = kernel_of(&constraints);
        let mut z_ech = Echelon::new(ring, width);
        for z in &z_gens {
            z_ech.insert(z);
        }
        let mut b_ech = Echelon::new(ring, width);
        for v in &self.b_vectors {
            b_ech.insert(v);
        }
        let log_h = z_ech.log_order() - b_ech.log_order();
        let h1 = H1::new(&self.module);
        let log_c1 = ((n - 1) * d) as u32 * ring.log_order();
        let log_b = log_c1 - h1.log_z();
        let (reps, exhaustive) = enumerate_quotient(ring, width, &z_gens, &b_ech, log_h, opts);
        Ok(CohomologySpace {
            degree: 2,
            log_z: log_h + log_b,
            log_b,
            log_h,
            classes: reps.iter().map(|c| self.expand(c)).collect(),
            exhaustive,
        })
    }
}

/// A cohomology class with a chosen cocycle representative.
#[derive(Clone, Debug)]
pub struct CohClass {
    module: GModule,
    representative: Cochain,
}

impl CohClass {
    pub fn new(module: GModule, representative: Cochain) -> Result<CohClass> {
        check_module(&module, &representative)?;
        if !(1..=2).contains(&representative.degree) {
            return Err(Error::Unsupported(alloc::format!(
                "classes of degree {}",
                representative.degree
            )));
        }
        if !is_cocycle(&module, &representative)? {
            return Err(invalid!("representative is not a cocycle"));
        }
        Ok(CohClass {
            module,
            representative,
        })
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn representative(&self) -> &Cochain {
        &self.representative
    }

    pub fn degree(&self) -> usize {
        self.representative.degree
    }

    pub fn is_zero(&self) -> bool {
        match self.degree() {
            1 => H1::new(&self.module).is_coboundary(&self.representative),
            _ => H2::new(&self.module).is_coboundary(&self.representative),
        }
    }

    pub fn same_class(&self, other: &CohClass) -> bool {
        if self.degree() != other.degree() || self.module != other.module {
            return false;
        }
        let diff = self.representative.sub(&other.representative);
        match self.degree() {
            1 => H1::new(&self.module).is_coboundary(&diff),
            _ => H2::new(&self.module).is_coboundary(&diff),
        }
    }

    pub fn restrict(&self, sub: &Arc<PermGroup>) -> Result<CohClass> {
        let (module, rep) = restrict_class(&self.module, &self.representative, sub)?;
        Ok(CohClass {
            module,
            representative: rep,
        })
    }
}

/// Restriction of a cochain to a subgroup, with the restricted module.
pub fn restrict_class(module: &GModule, c: &Cochain, sub: &Arc<PermGroup>) -> Result<(GModule, Cochain)> {
    check_module(module, c)?;
    let map = module.element_map(sub)?;
    Ok((module.restrict(sub)?, c.restrict(&map)))
}

/// Coefficient map between modules over possibly different rings `Z/m`:
/// an integer matrix applied to representatives and reduced into the target.
fn apply_mixed(map: &Matrix, v: &[u8], target: Zm) -> ModVector {
    let m = target.modulus() as u32;
    (0..map.rows())
        .map(|i| {
            let s: u32 = map.row(i).iter().zip(v).map(|(&a, &b)| a as u32 * b as u32).sum();
            (s % m) as u8
        })
        .collect()
}

/// `0 -> A -> B -> C -> 0` of modules over one group, with coefficient
/// rings `Z/m_A`, `Z/m_B`, `Z/m_C` that are powers of one prime and
/// `m_A, m_C` dividing `m_B`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    a: GModule,
    b: GModule,
    c: GModule,
    inj: Matrix,
    surj: Matrix,
    lift_solver: SpanSolver,
    pull_solver: SpanSolver,
}

/// Largest `|B|` for which exactness is checked by enumeration.
const EXACTNESS_ENUM_LIMIT: u64 = 1 << 16;

impl ShortExactSequence {
    /// `inj` is `dim B x dim A`, `surj` is `dim C x dim B`, entries taken as
    /// integers and reduced into the target ring.
    pub fn new(a: GModule, b: GModule, c: GModule, inj: Matrix, surj: Matrix) -> Result<ShortExactSequence> {
        let (ra, rb, rc) = (a.ring(), b.ring(), c.ring());
        if ra.prime() != rb.prime() || rc.prime() != rb.prime() {
            return Err(invalid!("rings of a short exact sequence must share their prime"));
        }
        if rb.modulus() % ra.modulus() != 0 || rb.modulus() % rc.modulus() != 0 {
            return Err(invalid!("m_A and m_C must divide m_B"));
        }
        for (x, y) in [(&a, &b), (&b, &c)] {
            if x.group().elements() != y.group().elements() {
                return Err(invalid!("modules of a short exact sequence must share the group"));
            }
        }
        if (inj.rows(), inj.cols()) != (b.dim(), a.dim()) || (surj.rows(), surj.cols()) != (c.dim(), b.dim()) {
            return Err(invalid!("map shapes do not match module dimensions"));
        }
        let reduce = |m: &Matrix, ring: Zm| {
            let mut out = m.clone();
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    out.set(i, j, m.get(i, j) % ring.modulus());
                }
            }
            out
        };
        let inj = reduce(&inj, rb);
        let surj = reduce(&surj, rc);
        // well defined on Z/m_A: m_A * inj = 0 in Z/m_B
        if inj.as_slice().iter().any(|&x| (x as u32 * ra.modulus() as u32) % rb.modulus() as u32 != 0) {
            return Err(invalid!("injection is not well defined on Z/{}", ra.modulus()));
        }
        for &s in a.group().generator_indices() {
            for k in 0..a.dim() {
                let mut e = vec![0u8; a.dim()];
                e[k] = 1;
                let lhs = apply_mixed(&inj, &a.act(s, &e), rb);
                let rhs = b.act(s, &apply_mixed(&inj, &e, rb));
                if lhs != rhs {
                    return Err(invalid!("injection is not equivariant"));
                }
            }
            for k in 0..b.dim() {
                let mut e = vec![0u8; b.dim()];
                e[k] = 1;
                let lhs = apply_mixed(&surj, &b.act(s, &e), rc);
                let rhs = c.act(s, &apply_mixed(&surj, &e, rc));
                if lhs != rhs {
                    return Err(invalid!("surjection is not equivariant"));
                }
            }
        }
        check_exact(&a, &b, &c, &inj, &surj)?;
        let lift_solver = SpanSolver::new(rc, c.dim(), (0..b.dim()).map(|j| surj.column(j)));
        let pull_solver = SpanSolver::new(rb, b.dim(), (0..a.dim()).map(|j| inj.column(j)));
        Ok(ShortExactSequence {
            a,
            b,
            c,
            inj,
            surj,
            lift_solver,
            pull_solver,
        })
    }

    pub fn sub(&self) -> &GModule {
        &self.a
    }

    pub fn middle(&self) -> &GModule {
        &self.b
    }

    pub fn quotient(&self) -> &GModule {
        &self.c
    }

    /// Deterministic preimage in `B` of an element of `C`.
    pub fn lift(&self, v: &[u8]) -> ModVector {
        let x = self.lift_solver.solve(v).expect("surjection verified");
        debug_assert_eq!(apply_mixed(&self.surj, &x, self.c.ring()), v);
        x
    }

    pub fn include(&self, v: &[u8]) -> ModVector {
        apply_mixed(&self.inj, v, self.b.ring())
    }

    pub fn project(&self, v: &[u8]) -> ModVector {
        apply_mixed(&self.surj, v, self.c.ring())
    }

    /// The element of `A` mapping to `v`, if any.
    pub fn pull_back(&self, v: &[u8]) -> Option<ModVector> {
        let x = self.pull_solver.solve(v)?;
        Some(x.into_iter().map(|t| t % self.a.ring().modulus()).collect())
    }
}

fn check_exact(a: &GModule, b: &GModule, c: &GModule, inj: &Matrix, surj: &Matrix) -> Result<()> {
    let (ra, rb, rc) = (a.ring(), b.ring(), c.ring());
    let same_field = ra == rb && rb == rc && rb.is_field();
    let b_size = (rb.modulus() as u64).checked_pow(b.dim() as u32);
    if let Some(size) = b_size.filter(|&s| s <= EXACTNESS_ENUM_LIMIT) {
        let all = |ring: Zm, dim: usize, count: u64| {
            (0..count).map(move |mut code| {
                (0..dim)
                    .map(|_| {
                        let x = (code % ring.modulus() as u64) as u8;
                        code /= ring.modulus() as u64;
                        x
                    })
                    .collect::<Vec<u8>>()
            })
        };
        let a_size = (ra.modulus() as u64).pow(a.dim() as u32);
        let c_size = (rc.modulus() as u64).pow(c.dim() as u32);
        let image: BTreeSet<Vec<u8>> = all(ra, a.dim(), a_size).map(|x| apply_mixed(inj, &x, rb)).collect();
        if image.len() as u64 != a_size {
            return Err(invalid!("first map is not injective"));
        }
        let mut kernel = BTreeSet::new();
        let mut reached = BTreeSet::new();
        for x in all(rb, b.dim(), size) {
            let y = apply_mixed(surj, &x, rc);
            if y.iter().all(|&t| t == 0) {
                kernel.insert(x);
            }
            reached.insert(y);
        }
        if reached.len() as u64 != c_size {
            return Err(invalid!("second map is not surjective"));
        }
        if kernel != image {
            return Err(invalid!("sequence is not exact in the middle"));
        }
        return Ok(());
    }
    if same_field {
        let rank = |m: &Matrix| {
            let mut e = Echelon::new(rb, m.cols());
            for i in 0..m.rows() {
                e.insert(m.row(i));
            }
            e.len()
        };
        if rank(inj) != a.dim() || rank(surj) != c.dim() || a.dim() + c.dim() != b.dim() {
            return Err(invalid!("ranks do not fit an exact sequence"));
        }
        if !surj.mul(inj, rb).is_zero() {
            return Err(invalid!("composite of the maps is nonzero"));
        }
        return Ok(());
    }
    Err(Error::TooLarge {
        what: "middle module size for exactness check",
        actual: usize::MAX,
        cap: EXACTNESS_ENUM_LIMIT as usize,
    })
}

/// Connecting map `H^1(C) -> H^2(A)`: lift `gamma` pointwise, take the
/// coboundary in `B`, pull back along the injection.
pub fn connecting1(ses: &ShortExactSequence, gamma: &Cochain) -> Result<Cochain> {
    connecting1_shifted(ses, gamma, None)
}

/// As [`connecting1`], with the lift of `gamma(g)` moved by the image of
/// `shift(g)`; the class does not depend on the shift.
pub fn connecting1_shifted(ses: &ShortExactSequence, gamma: &Cochain, shift: Option<&Cochain>) -> Result<Cochain> {
    if !is_cocycle1(&ses.c, gamma) {
        return Err(invalid!("connecting map input must be a 1-cocycle"));
    }
    if let Some(s) = shift {
        check_module(&ses.a, s)?;
    }
    let group = ses.b.group().clone();
    let ring_b = ses.b.ring();
    let n = group.order();
    let mut lifts: Vec<ModVector> = vec![vec![0; ses.b.dim()]; n];
    for (g, l) in lifts.iter_mut().enumerate().skip(1) {
        *l = ses.lift(gamma.get(&[g]));
        if let Some(s) = shift {
            ring_b.add_assign_slice(l, &ses.include(s.get(&[g])));
        }
    }
    let mut failure = None;
    let out = Cochain::from_fn(&ses.a, 2, |args| {
        let (g, h) = (args[0], args[1]);
        let mut eta = ses.b.act(g, &lifts[h]);
        ring_b.sub_assign_slice(&mut eta, &lifts[group.mul(g, h)]);
        ring_b.add_assign_slice(&mut eta, &lifts[g]);
        match ses.pull_back(&eta) {
            Some(a) => a,
            None => {
                failure = Some((g, h));
                vec![0; ses.a.dim()]
            }
        }
    });
    if let Some((g, h)) = failure {
        return Err(Error::Inconsistent(alloc::format!(
            "coboundary of the lift leaves the submodule at ({g}, {h})"
        )));
    }
    Ok(out)
}

/// A finite set with a `G`-action on which a module acts simply
/// transitively; points are indexed `0..point_count()`.
pub trait AffineGSet {
    fn module(&self) -> &GModule;
    fn point_count(&self) -> usize;
    /// Index of `g . p`.
    fn act(&self, g: usize, p: usize) -> usize;
    /// The module element `p - q`.
    fn difference(&self, p: usize, q: usize) -> ModVector;
}

/// Exhaustive check of the torsor axioms.
pub fn check_affine_axioms(t: &dyn AffineGSet) -> Result<()> {
    let module = t.module();
    let ring = module.ring();
    let n = t.point_count();
    let expected = (ring.modulus() as u64).checked_pow(module.dim() as u32);
    if expected != Some(n as u64) {
        return Err(invalid!("torsor has {n} points, module has a different size"));
    }
    for q in 0..n {
        let mut seen = BTreeSet::new();
        for p in 0..n {
            if !seen.insert(t.difference(p, q)) {
                return Err(invalid!("difference to point {q} is not injective"));
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            let pq = t.difference(p, q);
            for r in 0..n {
                let mut s = pq.clone();
                ring.add_assign_slice(&mut s, &t.difference(q, r));
                if s != t.difference(p, r) {
                    return Err(invalid!("differences are not additive at ({p}, {q}, {r})"));
                }
            }
        }
    }
    for &g in module.group().generator_indices() {
        for p in 0..n {
            for q in 0..n {
                if t.difference(t.act(g, p), t.act(g, q)) != module.act(g, &t.difference(p, q)) {
                    return Err(invalid!("differences are not equivariant"));
                }
            }
        }
    }
    Ok(())
}

/// The class of a torsor, together with its fixed points.
#[derive(Clone, Debug)]
pub struct TorsorClass {
    /// `zeta(g) = g p_0 - p_0` for the base point `p_0 = 0`.
    pub cocycle: Cochain,
    pub fixed_points: Vec<usize>,
    pub trivial: bool,
}

/// Points fixed by every generator.
pub fn fixed_points(t: &dyn AffineGSet) -> Vec<usize> {
    let gens = t.module().group().generator_indices();
    (0..t.point_count())
        .filter(|&p| gens.iter().all(|&g| t.act(g, p) == p))
        .collect()
}

pub fn torsor_cocycle(t: &dyn AffineGSet, base: usize) -> Result<Cochain> {
    if t.point_count() == 0 {
        return Err(invalid!("empty torsor"));
    }
    if base >= t.point_count() {
        return Err(invalid!("base point {base} out of range"));
    }
    Ok(Cochain::from_fn(t.module(), 1, |args| t.difference(t.act(args[0], base), base)))
}

/// Torsor class with base point `0`; triviality is decided by linear algebra
/// and cross-checked against the fixed-point set.
pub fn torsor_class(t: &dyn AffineGSet) -> Result<TorsorClass> {
    let cocycle = torsor_cocycle(t, 0)?;
    let fixed = fixed_points(t);
    let trivial = H1::new(t.module()).is_coboundary(&cocycle);
    if trivial == fixed.is_empty() {
        return Err(Error::Inconsistent(alloc::format!(
            "torsor class triviality ({trivial}) disagrees with fixed points ({})",
            fixed.len()
        )));
    }
    Ok(TorsorClass {
        cocycle,
        fixed_points: fixed,
        trivial,
    })
}

/// A module acting on itself by translation.
#[derive(Clone, Debug)]
pub struct Translation {
    module: GModule,
    count: usize,
}

impl Translation {
    pub fn new(module: GModule) -> Result<Translation> {
        let count = (module.ring().modulus() as usize)
            .checked_pow(module.dim() as u32)
            .filter(|&c| c <= 1 << 16)
            .ok_or(Error::TooLarge {
                what: "translation torsor size",
                actual: usize::MAX,
                cap: 1 << 16,
            })?;
        Ok(Translation { module, count })
    }

    pub fn point(&self, mut p: usize) -> ModVector {
        let m = self.module.ring().modulus() as usize;
        (0..self.module.dim())
            .map(|_| {
                let x = (p % m) as u8;
                p /= m;
                x
            })
            .collect()
    }

    pub fn index(&self, v: &[u8]) -> usize {
        let m = self.module.ring().modulus() as usize;
        v.iter().rev().fold(0, |acc, &x| acc * m + x as usize)
    }
}

impl AffineGSet for Translation {
    fn module(&self) -> &GModule {
        &self.module
    }

    fn point_count(&self) -> usize {
        self.count
    }

    fn act(&self, g: usize, p: usize) -> usize {
        self.index(&self.module.act(g, &self.point(p)))
    }

    fn difference(&self, p: usize, q: usize) -> ModVector {
        let mut v = self.point(p);
        self.module.ring().sub_assign_slice(&mut v, &self.point(q));
        v
    }
}
