//! Central extensions `1 -> A -> B -> C -> 1` of abelian groups given by a
//! factor set, with a compatible `G`-action on all three terms.

use alloc::vec;
use alloc::vec::Vec;

use crate::cohomology::{cup11_unchecked, is_cocycle1, Cochain, CupConvention, H2};
use crate::error::{invalid, Error, Result};
use crate::gmodule::{GModule, ModVector};
use crate::linalg::Matrix;
use crate::ucons::BilinearForm;

/// Largest `|C|` accepted; the factor set is tabulated on `C x C`.
pub const MAX_QUOTIENT_SIZE: usize = 729;

/// An element `(a, c)` of `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BElement {
    pub a: ModVector,
    pub c: ModVector,
}

#[derive(Clone, Debug)]
pub struct CentralExt {
    kernel: GModule,
    quotient: GModule,
    size: usize,
    /// `f(c, c')` at `index(c) * size + index(c')`.
    table: Vec<ModVector>,
}

impl CentralExt {
    /// Tabulates `f` and checks normalization, the cocycle identity on all
    /// triples, and `f(gc, gc') = g f(c, c')` for the generators of `G`.
    pub fn new<F>(kernel: GModule, quotient: GModule, f: F) -> Result<CentralExt>
    where
        F: Fn(&[u8], &[u8]) -> ModVector,
    {
        if kernel.group().elements() != quotient.group().elements() {
            return Err(invalid!("kernel and quotient carry different groups"));
        }
        let m = quotient.ring().modulus() as usize;
        let size = m
            .checked_pow(quotient.dim() as u32)
            .filter(|&s| s <= MAX_QUOTIENT_SIZE)
            .ok_or(Error::TooLarge {
                what: "quotient order",
                actual: usize::MAX,
                cap: MAX_QUOTIENT_SIZE,
            })?;
        let elems: Vec<ModVector> = (0..size).map(|i| decode(i, m, quotient.dim())).collect();
        let ring = kernel.ring();
        let mut table = Vec::with_capacity(size * size);
        for x in &elems {
            for y in &elems {
                let v: ModVector = f(x, y).iter().map(|&t| ring.reduce(t as i64)).collect();
                if v.len() != kernel.dim() {
                    return Err(invalid!("factor set values must have length {}", kernel.dim()));
                }
                table.push(v);
            }
        }
        let ext = CentralExt {
            kernel,
            quotient,
            size,
            table,
        };
        ext.validate(&elems)?;
        Ok(ext)
    }

    fn validate(&self, elems: &[ModVector]) -> Result<()> {
        let ring = self.kernel.ring();
        for i in 0..self.size {
            if !is_zero(self.f_idx(0, i)) || !is_zero(self.f_idx(i, 0)) {
                return Err(invalid!("factor set is not normalized"));
            }
        }
        for i in 0..self.size {
            for j in 0..self.size {
                let ij = self.add_idx(i, j);
                for k in 0..self.size {
                    let mut lhs = self.f_idx(i, j).to_vec();
                    ring.add_assign_slice(&mut lhs, self.f_idx(ij, k));
                    let mut rhs = self.f_idx(j, k).to_vec();
                    ring.add_assign_slice(&mut rhs, self.f_idx(i, self.add_idx(j, k)));
                    if lhs != rhs {
                        return Err(invalid!("factor set violates the cocycle identity"));
                    }
                }
            }
        }
        for &g in self.quotient.group().generator_indices() {
            for (i, x) in elems.iter().enumerate() {
                let gi = self.index(&self.quotient.act(g, x));
                for (j, y) in elems.iter().enumerate() {
                    let gj = self.index(&self.quotient.act(g, y));
                    if self.f_idx(gi, gj) != self.kernel.act(g, self.f_idx(i, j)).as_slice() {
                        return Err(invalid!("factor set is not equivariant"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn kernel(&self) -> &GModule {
        &self.kernel
    }

    pub fn quotient(&self) -> &GModule {
        &self.quotient
    }

    /// `|B|`
    pub fn order(&self) -> usize {
        self.size * (self.kernel.ring().modulus() as usize).pow(self.kernel.dim() as u32)
    }

    fn index(&self, c: &[u8]) -> usize {
        let m = self.quotient.ring().modulus() as usize;
        c.iter().rev().fold(0usize, |acc, &x| acc * m + x as usize)
    }

    fn add_idx(&self, i: usize, j: usize) -> usize {
        let m = self.quotient.ring().modulus() as usize;
        let d = self.quotient.dim();
        let (x, y) = (decode(i, m, d), decode(j, m, d));
        let mut s = x;
        self.quotient.ring().add_assign_slice(&mut s, &y);
        self.index(&s)
    }

    fn f_idx(&self, i: usize, j: usize) -> &[u8] {
        &self.table[i * self.size + j]
    }

    pub fn factor(&self, c: &[u8], c2: &[u8]) -> &[u8] {
        self.f_idx(self.index(c), self.index(c2))
    }

    fn check(&self, x: &BElement) -> Result<()> {
        let ok = x.a.len() == self.kernel.dim()
            && x.c.len() == self.quotient.dim()
            && x.a.iter().all(|&v| v < self.kernel.ring().modulus())
            && x.c.iter().all(|&v| v < self.quotient.ring().modulus());
        if ok {
            Ok(())
        } else {
            Err(invalid!("element does not belong to the extension"))
        }
    }

    pub fn identity(&self) -> BElement {
        BElement {
            a: self.kernel.zero(),
            c: self.quotient.zero(),
        }
    }

    /// The set-section `c -> (0, c)`.
    pub fn section(&self, c: &[u8]) -> BElement {
        BElement {
            a: self.kernel.zero(),
            c: c.to_vec(),
        }
    }

    pub fn mul(&self, x: &BElement, y: &BElement) -> Result<BElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    fn mul_unchecked(&self, x: &BElement, y: &BElement) -> BElement {
        let ring = self.kernel.ring();
        let mut a = x.a.clone();
        ring.add_assign_slice(&mut a, &y.a);
        ring.add_assign_slice(&mut a, self.factor(&x.c, &y.c));
        let mut c = x.c.clone();
        self.quotient.ring().add_assign_slice(&mut c, &y.c);
        BElement { a, c }
    }

    /// `(a, c)^{-1} = (-a - f(c, -c), -c)`
    pub fn inv(&self, x: &BElement) -> Result<BElement> {
        self.check(x)?;
        Ok(self.inv_unchecked(x))
    }

    fn inv_unchecked(&self, x: &BElement) -> BElement {
        let qr = self.quotient.ring();
        let kr = self.kernel.ring();
        let c: ModVector = x.c.iter().map(|&v| qr.neg(v)).collect();
        let mut a: ModVector = x.a.iter().map(|&v| kr.neg(v)).collect();
        kr.sub_assign_slice(&mut a, self.factor(&x.c, &c));
        BElement { a, c }
    }

    pub fn act(&self, g: usize, x: &BElement) -> BElement {
        BElement {
            a: self.kernel.act(g, &x.a),
            c: self.quotient.act(g, &x.c),
        }
    }

    /// `x y x^{-1} y^{-1}`, which lies in `A`.
    pub fn commutator(&self, x: &BElement, y: &BElement) -> Result<ModVector> {
        let xy = self.mul(x, y)?;
        let k = self.mul_unchecked(
            &self.mul_unchecked(&xy, &self.inv_unchecked(x)),
            &self.inv_unchecked(y),
        );
        if !is_zero(&k.c) {
            return Err(Error::Inconsistent("commutator left the kernel".into()));
        }
        Ok(k.a)
    }

    /// Element order in `B`.
    pub fn element_order(&self, x: &BElement) -> Result<usize> {
        self.check(x)?;
        let id = self.identity();
        let mut y = x.clone();
        let mut k = 1;
        while y != id {
            y = self.mul_unchecked(&y, x);
            k += 1;
        }
        Ok(k)
    }

    /// `[c, c'] = f(c, c') - f(c', c)` as a form `C x C -> A`; bilinearity
    /// and the alternating property are checked on all pairs.
    pub fn commutator_pairing(&self) -> Result<BilinearForm> {
        if self.kernel.ring() != self.quotient.ring() {
            return Err(Error::Unsupported(
                "commutator pairing as a form needs a common coefficient ring".into(),
            ));
        }
        let ring = self.kernel.ring();
        let d = self.quotient.dim();
        let da = self.kernel.dim();
        let m = ring.modulus() as usize;
        let pair = |x: &[u8], y: &[u8]| -> Result<ModVector> {
            let direct = self.commutator(&self.section(x), &self.section(y))?;
            let mut closed = self.factor(x, y).to_vec();
            ring.sub_assign_slice(&mut closed, self.factor(y, x));
            if direct != closed {
                return Err(Error::Inconsistent("commutator disagrees with f(c,c') - f(c',c)".into()));
            }
            Ok(direct)
        };
        let mut matrix = Matrix::zeros(da, d * d);
        let unit = |i: usize| {
            let mut e = vec![0u8; d];
            e[i] = 1;
            e
        };
        for i in 0..d {
            for j in 0..d {
                let v = pair(&unit(i), &unit(j))?;
                for (r, &x) in v.iter().enumerate() {
                    matrix.set(r, i * d + j, x);
                }
            }
        }
        let form = BilinearForm::new(self.quotient.clone(), self.kernel.clone(), matrix)?;
        for i in 0..self.size {
            let x = decode(i, m, d);
            if !is_zero(&pair(&x, &x)?) {
                return Err(Error::Inconsistent("commutator pairing is not alternating".into()));
            }
            for j in 0..self.size {
                let y = decode(j, m, d);
                if pair(&x, &y)? != form.eval(&x, &y) {
                    return Err(Error::Inconsistent("commutator pairing is not bilinear".into()));
                }
            }
        }
        Ok(form)
    }

    /// `q(gamma)(g, h) = s(gamma(g)) . g s(gamma(h)) . s(gamma(gh))^{-1}`,
    /// which lies in `A`.
    pub fn nonabelian_connecting(&self, gamma: &Cochain) -> Result<Cochain> {
        if !is_cocycle1(&self.quotient, gamma) {
            return Err(invalid!("connecting map input must be a 1-cocycle"));
        }
        let group = self.quotient.group().clone();
        let mut stray = false;
        let out = Cochain::from_fn(&self.kernel, 2, |args| {
            let (g, h) = (args[0], args[1]);
            let x = self.section(gamma.get(&[g]));
            let y = self.act(g, &self.section(gamma.get(&[h])));
            let z = self.inv_unchecked(&self.section(gamma.get(&[group.mul(g, h)])));
            let p = self.mul_unchecked(&self.mul_unchecked(&x, &y), &z);
            stray |= !is_zero(&p.c);
            p.a
        });
        if stray {
            return Err(Error::Inconsistent("coboundary left the kernel".into()));
        }
        Ok(out)
    }

    /// Compares `q(g1 + g2) - q(g1) - q(g2)` with both signs of the pushed
    /// forward cup product `[g1 u g2]`.
    pub fn commutator_identity_check(&self, gamma1: &Cochain, gamma2: &Cochain) -> Result<CommutatorVerdict> {
        let pairing = self.commutator_pairing()?;
        let q1 = self.nonabelian_connecting(gamma1)?;
        let q2 = self.nonabelian_connecting(gamma2)?;
        let q12 = self.nonabelian_connecting(&gamma1.add(gamma2))?;
        let defect = q12.sub(&q1).sub(&q2);
        let cc = self.quotient.tensor_square();
        let cup = cup11_unchecked(CupConvention::Standard, &cc, gamma1, &self.quotient, gamma2);
        let pushed = cup.pushforward(pairing.matrix());
        let h2 = H2::new(&self.kernel);
        Ok(CommutatorVerdict {
            defect_is_coboundary: h2.is_coboundary(&defect),
            matches_minus: h2.cohomologous(&defect, &pushed.neg()).is_some(),
            matches_plus: h2.cohomologous(&defect, &pushed).is_some(),
        })
    }
}

/// Outcome of [`CentralExt::commutator_identity_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommutatorVerdict {
    pub defect_is_coboundary: bool,
    /// The defect is cohomologous to `-[g1 u g2]`.
    pub matches_minus: bool,
    /// The defect is cohomologous to `+[g1 u g2]`.
    pub matches_plus: bool,
}

impl CommutatorVerdict {
    /// Whether the two signs give different answers, i.e. the cup term is
    /// not 2-torsion in cohomology.
    pub fn sign_detectable(&self) -> bool {
        self.matches_minus != self.matches_plus
    }
}

fn decode(mut i: usize, m: usize, d: usize) -> ModVector {
    let mut v = vec![0u8; d];
    for x in v.iter_mut() {
        *x = (i % m) as u8;
        i /= m;
    }
    v
}

fn is_zero(v: &[u8]) -> bool {
    v.iter().all(|&x| x == 0)
}
