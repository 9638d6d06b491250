//! The extension `1 -> M (x) M -> UM -> M -> 1`, its connecting map, and
//! obstruction classes of bilinear forms.
//!
//! Elements of `UM` are pairs `(m, t)` standing for `1 + m + t` with the
//! product `(m, t)(m', t') = (m + m', m (x) m' + t + t')`.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology::{cup11_unchecked, is_cocycle1, Cochain, CohomologyOptions, CupConvention, H1, H2};
use crate::error::{invalid, Error, Result};
use crate::gmodule::{GModule, ModVector};
use crate::linalg::{Echelon, Matrix};
use crate::ring::Zm;

/// An element `1 + m + t` of `UM`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UElement {
    pub m: ModVector,
    pub t: ModVector,
}

/// Arithmetic in `UM` for a free `Z/m`-module of rank `dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UGroup {
    ring: Zm,
    dim: usize,
}

impl UGroup {
    pub fn new(ring: Zm, dim: usize) -> UGroup {
        UGroup { ring, dim }
    }

    pub fn of(module: &GModule) -> UGroup {
        UGroup::new(module.ring(), module.dim())
    }

    pub fn identity(&self) -> UElement {
        UElement {
            m: vec![0; self.dim],
            t: vec![0; self.dim * self.dim],
        }
    }

    fn check(&self, x: &UElement) -> Result<()> {
        if x.m.len() != self.dim || x.t.len() != self.dim * self.dim {
            return Err(invalid!("element does not belong to U of a rank {} module", self.dim));
        }
        if x.m.iter().chain(&x.t).any(|&v| v >= self.ring.modulus()) {
            return Err(invalid!("element has unreduced coordinates"));
        }
        Ok(())
    }

    /// `m (x) m'` in coordinates `i * dim + j`.
    pub fn outer(&self, a: &[u8], b: &[u8]) -> ModVector {
        let d = self.dim;
        let mut out = vec![0u8; d * d];
        for (i, &x) in a.iter().enumerate() {
            self.ring.axpy(&mut out[i * d..(i + 1) * d], x, b);
        }
        out
    }

    pub fn mul(&self, x: &UElement, y: &UElement) -> Result<UElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    fn mul_unchecked(&self, x: &UElement, y: &UElement) -> UElement {
        let mut m = x.m.clone();
        self.ring.add_assign_slice(&mut m, &y.m);
        let mut t = self.outer(&x.m, &y.m);
        self.ring.add_assign_slice(&mut t, &x.t);
        self.ring.add_assign_slice(&mut t, &y.t);
        UElement { m, t }
    }

    /// `(m, t)^{-1} = (-m, m (x) m - t)`
    pub fn inv(&self, x: &UElement) -> Result<UElement> {
        self.check(x)?;
        Ok(self.inv_unchecked(x))
    }

    fn inv_unchecked(&self, x: &UElement) -> UElement {
        let m: ModVector = x.m.iter().map(|&v| self.ring.neg(v)).collect();
        let mut t = self.outer(&x.m, &x.m);
        self.ring.sub_assign_slice(&mut t, &x.t);
        UElement { m, t }
    }

    /// The set-theoretic section `m -> 1 + m`.
    pub fn section(&self, m: &[u8]) -> UElement {
        UElement {
            m: m.to_vec(),
            t: vec![0; self.dim * self.dim],
        }
    }

    pub fn commutator(&self, x: &UElement, y: &UElement) -> Result<UElement> {
        let xy = self.mul(x, y)?;
        let xi = self.inv_unchecked(x);
        let yi = self.inv_unchecked(y);
        Ok(self.mul_unchecked(&self.mul_unchecked(&xy, &xi), &yi))
    }

    /// `g (m, t) = (g m, (g (x) g) t)`
    pub fn act(&self, module: &GModule, g: usize, x: &UElement) -> UElement {
        let a = module.action(g);
        let d = self.dim;
        let mut t = vec![0u8; d * d];
        // (A (x) A) t, computed as A T A^T on the d x d matrix T
        for i in 0..d {
            for j in 0..d {
                let tij = x.t[i * d + j];
                if tij == 0 {
                    continue;
                }
                for k in 0..d {
                    let aki = self.ring.mul(a.get(k, i), tij);
                    if aki == 0 {
                        continue;
                    }
                    for l in 0..d {
                        let v = self.ring.mul(aki, a.get(l, j));
                        t[k * d + l] = self.ring.add(t[k * d + l], v);
                    }
                }
            }
        }
        UElement {
            m: module.act(g, &x.m),
            t,
        }
    }
}

/// A section `m -> (m, q(m))` of `UM -> M`, given by a table over all of `M`.
#[derive(Clone, Debug)]
pub struct Section {
    dim: usize,
    modulus: usize,
    table: Vec<ModVector>,
}

/// Largest `|M|` for which a tabulated random section is built.
const SECTION_TABLE_LIMIT: usize = 1 << 16;

impl Section {
    /// `q(0) = 0`, other values drawn from a seeded generator.
    pub fn random(module: &GModule, seed: u64) -> Result<Section> {
        let ring = module.ring();
        let d = module.dim();
        let size = (ring.modulus() as usize)
            .checked_pow(d as u32)
            .filter(|&s| s <= SECTION_TABLE_LIMIT)
            .ok_or(Error::TooLarge {
                what: "module size for a tabulated section",
                actual: usize::MAX,
                cap: SECTION_TABLE_LIMIT,
            })?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let table = (0..size)
            .map(|i| {
                if i == 0 {
                    vec![0; d * d]
                } else {
                    (0..d * d).map(|_| rng.gen_range(0..ring.modulus())).collect()
                }
            })
            .collect();
        Ok(Section {
            dim: d,
            modulus: ring.modulus() as usize,
            table,
        })
    }

    pub fn apply(&self, m: &[u8]) -> UElement {
        let idx = m.iter().rev().fold(0usize, |acc, &x| acc * self.modulus + x as usize);
        UElement {
            m: m.to_vec(),
            t: self.table[idx].clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Connecting map of `UM` on a 1-cocycle, using the section `m -> 1 + m`:
/// `(g, h) -> s(z(g)) . g s(z(h)) . s(z(gh))^{-1}`. The result is checked
/// against the closed form `z(g) (x) g z(h)`.
pub fn u_connecting(module: &GModule, zeta: &Cochain) -> Result<Cochain> {
    let u = UGroup::of(module);
    let out = u_connecting_by(module, zeta, |m| u.section(m))?;
    let closed = cup11_unchecked(CupConvention::Standard, &module.tensor_square(), zeta, module, zeta);
    if out != closed {
        return Err(Error::Inconsistent(
            "connecting cocycle differs from the closed form".into(),
        ));
    }
    Ok(out)
}

/// The same construction with an arbitrary section.
pub fn u_connecting_with(module: &GModule, zeta: &Cochain, section: &Section) -> Result<Cochain> {
    if section.dim() != module.dim() {
        return Err(invalid!("section belongs to a module of another rank"));
    }
    u_connecting_by(module, zeta, |m| section.apply(m))
}

fn u_connecting_by<F>(module: &GModule, zeta: &Cochain, lift: F) -> Result<Cochain>
where
    F: Fn(&[u8]) -> UElement,
{
    if !is_cocycle1(module, zeta) {
        return Err(invalid!("connecting map input must be a 1-cocycle"));
    }
    let u = UGroup::of(module);
    let group = module.group().clone();
    let n = group.order();
    let lifts: Vec<UElement> = (0..n).map(|g| lift(zeta.get(&[g]))).collect();
    let inverses: Vec<UElement> = lifts.iter().map(|x| u.inv_unchecked(x)).collect();
    let mm = module.tensor_square();
    let mut stray = false;
    let out = Cochain::from_fn(&mm, 2, |args| {
        let (g, h) = (args[0], args[1]);
        let moved = u.act(module, g, &lifts[h]);
        let prod = u.mul_unchecked(&u.mul_unchecked(&lifts[g], &moved), &inverses[group.mul(g, h)]);
        if prod.m.iter().any(|&x| x != 0) {
            stray = true;
        }
        prod.t
    });
    if stray {
        return Err(Error::Inconsistent("coboundary left the kernel M (x) M".into()));
    }
    Ok(out)
}

/// Outcome of comparing the connecting map with the cup square.
#[derive(Clone, Debug, Default)]
pub struct SelfCupReport {
    pub log_h1: u32,
    pub exhaustive: bool,
    pub classes_checked: usize,
    pub witnesses_found: usize,
    /// Generator coordinates of every class compared, in enumeration order.
    pub classes: Vec<Vec<u8>>,
    /// Generator coordinates of classes where the comparison failed.
    pub failures: Vec<Vec<u8>>,
}

impl SelfCupReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.witnesses_found == self.classes_checked
    }
}

/// For every listed class `x` of `H^1(G, M)`: the connecting cocycle built
/// with a seeded random section is cohomologous to `x u x`.
pub fn selfcup_check(
    module: &GModule,
    opts: &CohomologyOptions,
    convention: CupConvention,
) -> Result<SelfCupReport> {
    let h1 = H1::new(module);
    let space = h1.space(opts);
    let mm = module.tensor_square();
    let h2 = H2::new(&mm);
    let section = Section::random(module, opts.seed)?;
    let mut report = SelfCupReport {
        log_h1: space.log_h,
        exhaustive: space.exhaustive,
        ..SelfCupReport::default()
    };
    for x in &space.classes {
        let conn = u_connecting_with(module, x, &section)?;
        let cup = cup11_unchecked(convention, &mm, x, module, x);
        report.classes_checked += 1;
        report.classes.push(h1.coords(x));
        match h2.cohomologous(&conn, &cup) {
            Some(_) => report.witnesses_found += 1,
            None => report.failures.push(h1.coords(x)),
        }
    }
    Ok(report)
}

/// A `G`-equivariant bilinear map `M x M -> N`, stored as a
/// `dim N x dim M^2` matrix on `M (x) M`.
#[derive(Clone, Debug)]
pub struct BilinearForm {
    source: GModule,
    target: GModule,
    matrix: Matrix,
}

impl BilinearForm {
    pub fn new(source: GModule, target: GModule, matrix: Matrix) -> Result<BilinearForm> {
        if source.ring() != target.ring() {
            return Err(invalid!("source and target rings differ"));
        }
        let d = source.dim();
        if matrix.rows() != target.dim() || matrix.cols() != d * d {
            return Err(invalid!("form matrix must be {} x {}", target.dim(), d * d));
        }
        let square = source.tensor_square();
        if !square.is_equivariant(&target, &matrix) {
            return Err(invalid!("bilinear form is not equivariant"));
        }
        Ok(BilinearForm { source, target, matrix })
    }

    /// Form into the trivial rank one module from a Gram matrix
    /// (`gram[i][j] = beta(e_i, e_j)`).
    pub fn from_gram(source: GModule, gram: &[Vec<u8>]) -> Result<BilinearForm> {
        let d = source.dim();
        let target = GModule::trivial(source.group().clone(), source.ring(), 1);
        let mut matrix = Matrix::zeros(1, d * d);
        for (i, row) in gram.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                matrix.set(0, i * d + j, x % source.ring().modulus());
            }
        }
        BilinearForm::new(source, target, matrix)
    }

    pub fn source(&self) -> &GModule {
        &self.source
    }

    pub fn target(&self) -> &GModule {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `beta(e_i, e_j)`
    pub fn on_basis(&self, i: usize, j: usize) -> ModVector {
        self.matrix.column(i * self.source.dim() + j)
    }

    pub fn eval(&self, x: &[u8], y: &[u8]) -> ModVector {
        let t = UGroup::of(&self.source).outer(x, y);
        self.matrix.apply(&t, self.source.ring())
    }

    pub fn is_symmetric(&self) -> bool {
        let d = self.source.dim();
        (0..d).all(|i| (0..d).all(|j| self.on_basis(i, j) == self.on_basis(j, i)))
    }

    pub fn is_alternating(&self) -> bool {
        let ring = self.source.ring();
        let d = self.source.dim();
        (0..d).all(|i| {
            self.on_basis(i, i).iter().all(|&x| x == 0)
                && (0..d).all(|j| {
                    let mut s = self.on_basis(i, j);
                    ring.add_assign_slice(&mut s, &self.on_basis(j, i));
                    s.iter().all(|&x| x == 0)
                })
        })
    }

    pub fn add(&self, other: &BilinearForm) -> Result<BilinearForm> {
        if self.source != other.source || self.target != other.target {
            return Err(invalid!("forms live on different modules"));
        }
        let ring = self.source.ring();
        let mut matrix = self.matrix.clone();
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                matrix.set(i, j, ring.add(matrix.get(i, j), other.matrix.get(i, j)));
            }
        }
        Ok(BilinearForm {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }
}

/// Which dual sequence defines the obstruction class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    /// Through `0 -> S^2 M -> (UM)^ab -> M -> 0`; odd `m` only.
    Symmetric,
    /// Through the exterior-square sequence; `m = 2` only.
    Alternating,
}

/// The quadratic map `Q` used to split the dual sequence: a fixed function
/// of basis coordinates with `Q(x + y) - Q(x) - Q(y) = -beta(x, y)`.
fn splitting_quadratic(beta: &BilinearForm, kind: FormKind, x: &[u8]) -> ModVector {
    let ring = beta.source.ring();
    let d = beta.source.dim();
    let mut q = vec![0u8; beta.target.dim()];
    for i in 0..d {
        if x[i] == 0 {
            continue;
        }
        for j in i + 1..d {
            let c = ring.mul(x[i], x[j]);
            ring.axpy(&mut q, c, &beta.on_basis(i, j));
        }
        if kind == FormKind::Symmetric {
            let a = x[i] as u32;
            let binom = ring.reduce((a * a.saturating_sub(1) / 2) as i64);
            ring.axpy(&mut q, binom, &beta.on_basis(i, i));
        }
    }
    if kind == FormKind::Symmetric {
        for v in q.iter_mut() {
            *v = ring.neg(*v);
        }
    }
    q
}

fn check_kind(beta: &BilinearForm, kind: FormKind) -> Result<()> {
    let ring = beta.source.ring();
    match kind {
        FormKind::Alternating => {
            if ring.modulus() != 2 {
                return Err(Error::Unsupported(alloc::format!(
                    "alternating obstruction classes need m = 2, got m = {}",
                    ring.modulus()
                )));
            }
            if !beta.is_alternating() {
                return Err(invalid!("form is not alternating"));
            }
        }
        FormKind::Symmetric => {
            if ring.prime() == 2 {
                return Err(Error::Unsupported(alloc::format!(
                    "symmetric obstruction classes need odd m, got m = {}",
                    ring.modulus()
                )));
            }
            if !beta.is_symmetric() {
                return Err(invalid!("form is not symmetric"));
            }
        }
    }
    Ok(())
}

/// The 1-cocycle `c(g) = g . Q . g^{-1} - Q` in `Hom(M, N)`, returned with
/// that module (coordinates as in [`GModule::hom_module`]).
pub fn obstruction_class(beta: &BilinearForm, kind: FormKind) -> Result<(GModule, Cochain)> {
    check_kind(beta, kind)?;
    let m = &beta.source;
    let n = &beta.target;
    let ring = m.ring();
    let d = m.dim();
    let dn = n.dim();
    let hom = m.hom_module(n)?;
    let group = m.group().clone();
    let c = Cochain::from_fn(&hom, 1, |args| {
        let g = args[0];
        let ginv = group.inv(g);
        let mut coords = vec![0u8; d * dn];
        for i in 0..d {
            let mut e = vec![0u8; d];
            e[i] = 1;
            let pulled = m.act(ginv, &e);
            let mut v = n.act(g, &splitting_quadratic(beta, kind, &pulled));
            ring.sub_assign_slice(&mut v, &splitting_quadratic(beta, kind, &e));
            coords[i * dn..(i + 1) * dn].copy_from_slice(&v);
        }
        coords
    });
    if !is_cocycle1(&hom, &c) {
        return Err(Error::Inconsistent("obstruction cochain is not a cocycle".into()));
    }
    Ok((hom, c))
}

/// `(phi u x)(g, h) = phi(g)(g x(h))` for `phi` in `Hom(M, N)`.
pub fn evaluation_cup(hom: &GModule, phi: &Cochain, module: &GModule, x: &Cochain, target: &GModule) -> Result<Cochain> {
    if !is_cocycle1(hom, phi) || !is_cocycle1(module, x) {
        return Err(invalid!("evaluation cup inputs must be 1-cocycles"));
    }
    let ring = module.ring();
    let d = module.dim();
    let dn = target.dim();
    Ok(Cochain::from_fn(target, 2, |args| {
        let f = phi.get(&args[..1]);
        let y = module.act(args[0], x.get(&args[1..]));
        let mut out = vec![0u8; dn];
        for i in 0..d {
            ring.axpy(&mut out, y[i], &f[i * dn..(i + 1) * dn]);
        }
        out
    }))
}

/// A quadratic map `M -> N` with prescribed polarization, recorded by its
/// values on the basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticMap {
    pub basis_values: Vec<ModVector>,
    polar: Matrix,
    dim: usize,
}

impl QuadraticMap {
    /// `q(sum a_i e_i) = sum a_i v_i + sum_{i<j} a_i a_j beta(e_i, e_j)` over F2.
    pub fn eval(&self, x: &[u8]) -> ModVector {
        let rows = self.polar.rows();
        let mut out = vec![0u8; rows];
        for i in 0..self.dim {
            if x[i] & 1 == 0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(&self.basis_values[i]) {
                *o ^= v;
            }
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                if xj & 1 == 1 {
                    for (r, o) in out.iter_mut().enumerate() {
                        *o ^= self.polar.get(r, i * self.dim + j);
                    }
                }
            }
        }
        out
    }
}

/// Largest search space `|N|^{dim M}` for [`quadratic_refinement`].
pub const REFINEMENT_SEARCH_LIMIT: u64 = 1 << 20;

/// Exhaustive search for a `G`-equivariant quadratic map whose
/// polarization is the alternating F2 form `beta`.
pub fn quadratic_refinement(beta: &BilinearForm) -> Result<Option<QuadraticMap>> {
    check_kind(beta, FormKind::Alternating)?;
    let m = &beta.source;
    let n = &beta.target;
    let d = m.dim();
    let dn = n.dim();
    let bits = d * dn;
    if bits > 20 || (1u64 << bits) > REFINEMENT_SEARCH_LIMIT {
        return Err(Error::TooLarge {
            what: "refinement search space (log2)",
            actual: bits,
            cap: 20,
        });
    }
    if d > 16 {
        return Err(Error::TooLarge {
            what: "module rank for refinement search",
            actual: d,
            cap: 16,
        });
    }
    let gens = m.group().generator_indices().to_vec();
    let all_points: Vec<ModVector> = (0..1usize << d)
        .map(|code| (0..d).map(|i| ((code >> i) & 1) as u8).collect())
        .collect();
    let make = |code: u64| QuadraticMap {
        basis_values: (0..d)
            .map(|i| (0..dn).map(|j| ((code >> (i * dn + j)) & 1) as u8).collect())
            .collect(),
        polar: beta.matrix.clone(),
        dim: d,
    };
    // q(gx) - g q(x) is additive in x, so testing basis vectors decides
    // equivariance; the winner is re-checked on every point.
    let basis: Vec<ModVector> = (0..d)
        .map(|i| {
            let mut e = vec![0u8; d];
            e[i] = 1;
            e
        })
        .collect();
    let equivariant_on = |q: &QuadraticMap, points: &[ModVector]| {
        gens.iter().all(|&g| points.iter().all(|x| q.eval(&m.act(g, x)) == n.act(g, &q.eval(x))))
    };
    for code in 0..(1u64 << bits) {
        let q = make(code);
        if equivariant_on(&q, &basis) {
            if !equivariant_on(&q, &all_points) {
                return Err(Error::Inconsistent("refinement passes on a basis only".into()));
            }
            return Ok(Some(q));
        }
    }
    Ok(None)
}

/// All equivariant alternating forms `M x M -> N` over F2, as long as there
/// are at most `limit` of them.
pub fn equivariant_alternating_forms(source: &GModule, target: &GModule, limit: usize) -> Result<Vec<BilinearForm>> {
    if source.ring().modulus() != 2 || target.ring().modulus() != 2 {
        return Err(Error::Unsupported("alternating forms are enumerated over F2 only".into()));
    }
    let d = source.dim();
    let dn = target.dim();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
    let width = pairs.len() * dn;
    let square = source.tensor_square();
    let matrix_of = |coords: &[u8]| {
        let mut mat = Matrix::zeros(dn, d * d);
        for (p, &(i, j)) in pairs.iter().enumerate() {
            for r in 0..dn {
                let x = coords[p * dn + r];
                mat.set(r, i * d + j, x);
                mat.set(r, j * d + i, x);
            }
        }
        mat
    };
    // equivariance is linear in the coordinates
    let mut constraints = Echelon::new(Zm::F2, width);
    for &g in source.group().generator_indices() {
        let cols: Vec<Matrix> = (0..width)
            .map(|k| {
                let mut e = vec![0u8; width];
                e[k] = 1;
                let b = matrix_of(&e);
                let mut lhs = b.mul(square.action(g), Zm::F2);
                let rhs = target.action(g).mul(&b, Zm::F2);
                for i in 0..lhs.rows() {
                    for j in 0..lhs.cols() {
                        lhs.set(i, j, lhs.get(i, j) ^ rhs.get(i, j));
                    }
                }
                lhs
            })
            .collect();
        for r in 0..dn {
            for c in 0..d * d {
                let row: Vec<u8> = cols.iter().map(|m| m.get(r, c)).collect();
                constraints.insert(&row);
            }
        }
    }
    let basis = crate::linalg::kernel_of(&constraints);
    let count = 1usize.checked_shl(basis.len() as u32).filter(|&c| c <= limit).ok_or(Error::TooLarge {
        what: "number of equivariant alternating forms",
        actual: basis.len(),
        cap: limit,
    })?;
    (0..count)
        .map(|code| {
            let mut v = vec![0u8; width];
            for (k, b) in basis.iter().enumerate() {
                if code >> k & 1 == 1 {
                    Zm::F2.add_assign_slice(&mut v, b);
                }
            }
            BilinearForm::new(source.clone(), target.clone(), matrix_of(&v))
        })
        .collect()
}
