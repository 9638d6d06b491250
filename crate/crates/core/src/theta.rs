//! Combinatorial model of the 2-torsion of a hyperelliptic Jacobian and its
//! theta characteristics.
//!
//! For a genus `g` curve `y^2 = f(x)` with `deg f = 2g + 2`, let `D` be the
//! set of roots of `f`. Subsets of `D` of even size modulo complementation
//! form `W0`, a `2g`-dimensional F2-module; odd subsets (for even `g`) form
//! the torsor of theta characteristics. The Galois group acts through its
//! permutation action on `D`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::cohomology::{
    cup11_unchecked, restrict_class, torsor_class, AffineGSet, CohClass, CohomologyOptions, CupConvention, H1, H2,
};
use crate::error::{invalid, Error, Result};
use crate::gmodule::{GModule, ModVector};
use crate::linalg::Matrix;
use crate::perm::{parse_generators, Perm, PermGroup};
use crate::ring::Zm;
use crate::ucons::{obstruction_class, BilinearForm, FormKind};

/// Largest genus handled; the torsor has `4^g` points.
pub const MAX_GENUS: usize = 8;

/// Largest group for which the cup-product half of the Jacobian identity is
/// checked.
pub const MAX_IDENTITY_ORDER: usize = 1440;

/// A subset of the roots modulo complementation, stored as the member not
/// containing the last root.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubsetClass {
    mask: u32,
    roots: u8,
}

impl SubsetClass {
    pub fn new(roots: usize, mask: u32) -> Result<SubsetClass> {
        if !(2..=32).contains(&roots) {
            return Err(invalid!("root count {roots} out of range"));
        }
        let full = full_mask(roots);
        if mask & !full != 0 {
            return Err(invalid!("subset mentions a root beyond {roots}"));
        }
        let canonical = if mask >> (roots - 1) & 1 == 1 { mask ^ full } else { mask };
        Ok(SubsetClass {
            mask: canonical,
            roots: roots as u8,
        })
    }

    pub fn from_indices(roots: usize, indices: &[usize]) -> Result<SubsetClass> {
        let mut mask = 0u32;
        for &i in indices {
            if i >= roots {
                return Err(invalid!("root {i} out of range"));
            }
            mask ^= 1 << i;
        }
        SubsetClass::new(roots, mask)
    }

    pub fn mask(&self) -> u32 {
        self.mask
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..self.roots as usize).filter(|&i| self.mask >> i & 1 == 1).collect()
    }

    /// Size parity, well defined since the total number of roots is even.
    pub fn parity(&self) -> u32 {
        self.mask.count_ones() % 2
    }

    pub fn sum(&self, other: &SubsetClass) -> SubsetClass {
        SubsetClass {
            mask: canonical(self.roots as usize, self.mask ^ other.mask),
            roots: self.roots,
        }
    }

    pub fn permute(&self, p: &Perm) -> SubsetClass {
        SubsetClass {
            mask: canonical(self.roots as usize, permute_mask(self.mask, p)),
            roots: self.roots,
        }
    }
}

fn full_mask(roots: usize) -> u32 {
    if roots == 32 {
        u32::MAX
    } else {
        (1u32 << roots) - 1
    }
}

fn canonical(roots: usize, mask: u32) -> u32 {
    if mask >> (roots - 1) & 1 == 1 {
        mask ^ full_mask(roots)
    } else {
        mask
    }
}

fn permute_mask(mask: u32, p: &Perm) -> u32 {
    let mut out = 0u32;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out |= 1 << p.image(i);
        m &= m - 1;
    }
    out
}

/// `|S n T| mod 2` for even classes.
pub fn weil_pairing(s: &SubsetClass, t: &SubsetClass) -> Result<u8> {
    if s.roots != t.roots {
        return Err(invalid!("classes live on different root sets"));
    }
    if s.parity() != 0 || t.parity() != 0 {
        return Err(invalid!("the pairing is defined on even classes only"));
    }
    Ok(((s.mask & t.mask).count_ones() % 2) as u8)
}

/// Coordinates of an even class in the basis `{i, i+1}`, `i < 2g`.
fn coords(roots: usize, class: &SubsetClass) -> ModVector {
    let d = roots - 2;
    let mut out = vec![0u8; d];
    let mut acc = 0u8;
    for (i, o) in out.iter_mut().enumerate() {
        acc ^= (class.mask >> i & 1) as u8;
        *o = acc;
    }
    out
}

fn basis_class(roots: usize, i: usize) -> SubsetClass {
    SubsetClass {
        mask: canonical(roots, 0b11 << i),
        roots: roots as u8,
    }
}

/// The theta torsor as a finite `G`-set under `W0`.
#[derive(Clone, Debug)]
pub struct ThetaTorsor {
    module: GModule,
    roots: usize,
    /// Sorted canonical masks.
    points: Vec<u32>,
}

impl ThetaTorsor {
    fn new(module: GModule, roots: usize, parity: u32) -> ThetaTorsor {
        let points: Vec<u32> = (0..1u32 << (roots - 1)).filter(|m| m.count_ones() % 2 == parity).collect();
        ThetaTorsor { module, roots, points }
    }

    pub fn point(&self, p: usize) -> SubsetClass {
        SubsetClass {
            mask: self.points[p],
            roots: self.roots as u8,
        }
    }

    pub fn index(&self, class: &SubsetClass) -> Option<usize> {
        self.points.binary_search(&class.mask).ok()
    }

    /// Points fixed by every element of `elements`.
    pub fn fixed_by(&self, elements: &[usize]) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&p| elements.iter().all(|&g| self.act(g, p) == p))
            .collect()
    }
}

impl AffineGSet for ThetaTorsor {
    fn module(&self) -> &GModule {
        &self.module
    }

    fn point_count(&self) -> usize {
        self.points.len()
    }

    fn act(&self, g: usize, p: usize) -> usize {
        let image = canonical(self.roots, permute_mask(self.points[p], self.module.group().element(g)));
        self.points.binary_search(&image).expect("permutations preserve parity")
    }

    fn difference(&self, p: usize, q: usize) -> ModVector {
        let class = SubsetClass {
            mask: canonical(self.roots, self.points[p] ^ self.points[q]),
            roots: self.roots as u8,
        };
        coords(self.roots, &class)
    }
}

#[derive(Clone, Debug)]
pub struct ThetaData {
    genus: usize,
    group: Arc<PermGroup>,
    w0: GModule,
    torsor: ThetaTorsor,
    e2: BilinearForm,
    gram: Matrix,
}

/// Builds `W0`, the theta torsor and the Weil pairing for a group acting on
/// `2g + 2` roots.
pub fn build_theta(genus: usize, group: Arc<PermGroup>) -> Result<ThetaData> {
    if genus == 0 || genus > MAX_GENUS {
        return Err(invalid!("genus must lie in 1..={MAX_GENUS}, got {genus}"));
    }
    let roots = 2 * genus + 2;
    if group.degree() != roots {
        return Err(invalid!(
            "genus {genus} needs a group on {roots} roots, got degree {}",
            group.degree()
        ));
    }
    let d = 2 * genus;
    let mats: Vec<Matrix> = group
        .generators()
        .iter()
        .map(|p| {
            let cols: Vec<ModVector> = (0..d).map(|i| coords(roots, &basis_class(roots, i).permute(p))).collect();
            Matrix::from_columns(d, &cols)
        })
        .collect();
    let w0 = GModule::new(group.clone(), Zm::F2, d, &mats)?;
    let mut gram = Matrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            gram.set(i, j, weil_pairing(&basis_class(roots, i), &basis_class(roots, j))?);
        }
    }
    let e2 = BilinearForm::from_gram(w0.clone(), &(0..d).map(|i| gram.row(i).to_vec()).collect::<Vec<_>>())?;
    let parity = ((genus + 1) % 2) as u32;
    let torsor = ThetaTorsor::new(w0.clone(), roots, parity);
    Ok(ThetaData {
        genus,
        group,
        w0,
        torsor,
        e2,
        gram,
    })
}

/// [`build_theta`] from 1-based cycle notation, e.g. `"(1 2)(5 6), (3 4)(5 6)"`.
pub fn build_theta_from_generators(genus: usize, generators: &str) -> Result<ThetaData> {
    let roots = 2 * genus + 2;
    let gens = parse_generators(generators, Some(roots))?;
    let group = PermGroup::closure(roots, &gens)?;
    build_theta(genus, Arc::new(group))
}

impl ThetaData {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn roots(&self) -> usize {
        2 * self.genus + 2
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn w0(&self) -> &GModule {
        &self.w0
    }

    pub fn torsor(&self) -> &ThetaTorsor {
        &self.torsor
    }

    pub fn e2(&self) -> &BilinearForm {
        &self.e2
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// Coordinates of an even class in `W0`.
    pub fn w0_coords(&self, class: &SubsetClass) -> Result<ModVector> {
        if class.parity() != 0 || class.roots as usize != self.roots() {
            return Err(invalid!("not an element of W0"));
        }
        Ok(coords(self.roots(), class))
    }
}

#[derive(Clone, Debug)]
pub struct ThetaClass {
    pub class: CohClass,
    pub trivial: bool,
    pub fixed_points: Vec<SubsetClass>,
}

pub fn theta_class(data: &ThetaData) -> Result<ThetaClass> {
    let t = torsor_class(&data.torsor)?;
    let fixed_points = t.fixed_points.iter().map(|&p| data.torsor.point(p)).collect();
    Ok(ThetaClass {
        class: CohClass::new(data.w0.clone(), t.cocycle)?,
        trivial: t.trivial,
        fixed_points,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicRow {
    pub generator: Perm,
    pub order: usize,
    pub fixed_points: usize,
    pub trivial: bool,
}

#[derive(Clone, Debug)]
pub struct LocalReport {
    pub globally_trivial: bool,
    pub rows: Vec<CyclicRow>,
    /// Nonzero globally, zero on every cyclic subgroup.
    pub sha_style: bool,
    pub note: String,
}

/// Restrictions of `c_T` to one cyclic subgroup per conjugacy class. Each
/// row's triviality is decided by fixed points and confirmed by restricting
/// the cocycle.
pub fn local_report(data: &ThetaData) -> Result<LocalReport> {
    let global = theta_class(data)?;
    let group = &data.group;
    let mut rows = Vec::new();
    for h in group.cyclic_subgroup_reps() {
        let idx = group.index_of(&h).ok_or(Error::Inconsistent("representative outside the group".into()))?;
        let elements = group.cyclic_subgroup(idx);
        let fixed = data.torsor.fixed_by(&elements);
        let sub = Arc::new(PermGroup::closure(group.degree(), core::slice::from_ref(&h))?);
        let (module, c) = restrict_class(&data.w0, global.class.representative(), &sub)?;
        let trivial = H1::new(&module).is_coboundary(&c);
        if trivial == fixed.is_empty() {
            return Err(Error::Inconsistent(alloc::format!(
                "restriction to <{h}> disagrees with its fixed points"
            )));
        }
        rows.push(CyclicRow {
            order: h.order(),
            generator: h,
            fixed_points: fixed.len(),
            trivial,
        });
    }
    let all_local = rows.iter().all(|r| r.trivial);
    Ok(LocalReport {
        globally_trivial: global.trivial,
        sha_style: !global.trivial && all_local,
        rows,
        note: "cyclic subgroups model unramified places; ramified and archimedean places need separate input".into(),
    })
}

#[derive(Clone, Debug, Default)]
pub struct IdentityVerdict {
    /// Whether the cup-product identity was attempted (skipped for large groups).
    pub cup_checked: bool,
    pub classes_checked: usize,
    pub cup_failures: usize,
    pub exhaustive: bool,
    /// Obstruction class of the Weil pairing equals the image of `c_T`.
    pub obstruction_matches: bool,
    pub c_t_trivial: bool,
}

impl IdentityVerdict {
    pub fn passed(&self) -> bool {
        self.obstruction_matches && self.cup_failures == 0
    }
}

/// `e2(x u x) ~ e2(x u c_T)` for listed classes `x`, and `c_{e2}` equal to
/// the image of `c_T` under `W0 -> Hom(W0, F2)`.
pub fn jacobian_identity_check(data: &ThetaData, opts: &CohomologyOptions) -> Result<IdentityVerdict> {
    let theta = theta_class(data)?;
    let c_t = theta.class.representative();
    let (hom, obstruction) = obstruction_class(&data.e2, FormKind::Alternating)?;
    let image = c_t.pushforward(&data.gram.transpose());
    let obstruction_matches = H1::new(&hom).cohomologous(&obstruction, &image).is_some();
    let mut verdict = IdentityVerdict {
        obstruction_matches,
        c_t_trivial: theta.trivial,
        ..IdentityVerdict::default()
    };
    if data.group.order() > MAX_IDENTITY_ORDER {
        return Ok(verdict);
    }
    verdict.cup_checked = true;
    let w0 = &data.w0;
    let square = w0.tensor_square();
    let target = data.e2.target();
    let h2 = H2::new(target);
    let space = H1::new(w0).space(opts);
    verdict.exhaustive = space.exhaustive;
    for x in &space.classes {
        let lhs = cup11_unchecked(CupConvention::Standard, &square, x, w0, x).pushforward(data.e2.matrix());
        let rhs = cup11_unchecked(CupConvention::Standard, &square, x, w0, c_t).pushforward(data.e2.matrix());
        verdict.classes_checked += 1;
        if h2.cohomologous(&lhs, &rhs).is_none() {
            verdict.cup_failures += 1;
        }
    }
    Ok(verdict)
}
