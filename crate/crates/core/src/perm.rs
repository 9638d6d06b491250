//! Permutations and fully enumerated permutation groups.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{invalid, Error, Result};

/// Default bound on the order of an enumerated group.
pub const DEFAULT_ORDER_CAP: usize = 10_080;

/// Groups up to this order keep a full multiplication table.
const TABLE_LIMIT: usize = 1024;

/// A permutation of `{0, .., n-1}`. Composition is right to left:
/// `(g * h)(i) = g(h(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        if n > 255 {
            return Err(invalid!("permutations on more than 255 points are not supported"));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(invalid!("{images:?} is not a bijection on 0..{n}"));
            }
            seen[x] = true;
        }
        Ok(Perm {
            images: images.into_iter().map(|x| x as u8).collect(),
        })
    }

    pub fn identity(n: usize) -> Perm {
        assert!(n <= 255);
        Perm {
            images: (0..n as u8).collect(),
        }
    }

    /// Builds a permutation from 0-based disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Perm> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n {
                    return Err(invalid!("point {} outside 1..={n}", a + 1));
                }
                if touched[a] {
                    return Err(invalid!("point {} appears twice in the cycles", a + 1));
                }
                touched[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm::new(images)
    }

    /// Parses one permutation in 1-based cycle notation, e.g. `(1 2)(3 4 5)`.
    /// `()` is the identity.
    pub fn parse_cycles(text: &str, n: usize) -> Result<Perm> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body_start = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(alloc::format!("expected '(' in {text:?}")))?;
            let close = body_start
                .find(')')
                .ok_or_else(|| Error::Parse(alloc::format!("unbalanced parenthesis in {text:?}")))?;
            let body = &body_start[..close];
            let mut cycle = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                let p: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(alloc::format!("bad point {tok:?} in {text:?}")))?;
                if p == 0 {
                    return Err(Error::Parse(alloc::format!("points are 1-based, found 0 in {text:?}")));
                }
                cycle.push(p - 1);
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
            rest = body_start[close + 1..].trim_start();
        }
        Perm::from_cycles(n, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u8; self.degree()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn fixes(&self, i: usize) -> bool {
        self.image(i) == i
    }

    /// Nontrivial cycles, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle lengths including fixed points, ascending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lens.iter().sum();
        lens.extend(core::iter::repeat(1).take(self.degree() - moved));
        lens.sort_unstable();
        lens
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().map(Vec::len).fold(1, lcm)
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// 1-based cycle notation; `()` for the identity.
    pub fn to_cycle_string(&self) -> String {
        use core::fmt::Write;
        let cycles = self.cycles();
        if cycles.is_empty() {
            return String::from("()");
        }
        let mut s = String::new();
        for c in cycles {
            s.push('(');
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{}", p + 1);
            }
            s.push(')');
        }
        s
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cycle_string())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Parses a comma separated generator list in 1-based cycle notation,
/// e.g. `"(1 2)(3 4), (1 2 3 4 5 6)"`. With `degree = None` the number of
/// points is the largest point mentioned.
pub fn parse_generators(text: &str, degree: Option<usize>) -> Result<Vec<Perm>> {
    let mut pieces = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        if !(0..=1).contains(&depth) {
            return Err(Error::Parse(alloc::format!("unbalanced parentheses in {text:?}")));
        }
        if ch == ',' && depth == 0 {
            pieces.push(core::mem::take(&mut current));
        } else {
            current.push(ch);
        }
    }
    if depth != 0 {
        return Err(Error::Parse(alloc::format!("unbalanced parentheses in {text:?}")));
    }
    pieces.push(current);
    let pieces: Vec<&str> = pieces.iter().map(|p| p.trim()).filter(|p| !p.is_empty()).collect();
    let max_point = text
        .split(|c: char| !c.is_ascii_digit())
        .filter_map(|t| t.parse::<usize>().ok())
        .max()
        .unwrap_or(0);
    let n = match degree {
        Some(n) if max_point > n => {
            return Err(invalid!("point {max_point} exceeds degree {n}"));
        }
        Some(n) => n,
        None => max_point.max(1),
    };
    pieces.into_iter().map(|p| Perm::parse_cycles(p, n)).collect()
}

/// A permutation group with all elements listed in lexicographic order of
/// their image arrays, so the identity has index 0.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    table: Option<Vec<u16>>,
    inverses: Vec<usize>,
    gen_indices: Vec<usize>,
}

/// Closure of `gens` on `n` points with the default order cap.
pub fn group_closure(n: usize, gens: &[Perm]) -> Result<PermGroup> {
    PermGroup::closure(n, gens)
}

impl PermGroup {
    pub fn closure(n: usize, gens: &[Perm]) -> Result<PermGroup> {
        PermGroup::closure_with_cap(n, gens, DEFAULT_ORDER_CAP)
    }

    pub fn closure_with_cap(n: usize, gens: &[Perm], cap: usize) -> Result<PermGroup> {
        if n > 255 {
            return Err(invalid!("at most 255 points are supported, got {n}"));
        }
        for g in gens {
            if g.degree() != n {
                return Err(invalid!("generator {g} acts on {} points, expected {n}", g.degree()));
            }
        }
        let id = Perm::identity(n);
        let mut seen = BTreeSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for s in gens {
                let y = x.compose(s);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(Error::TooLarge {
                            what: "group order",
                            actual: seen.len() + 1,
                            cap,
                        });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let elements: Vec<Perm> = seen.into_iter().collect();
        Ok(PermGroup::from_sorted(n, gens.to_vec(), elements))
    }

    fn from_sorted(degree: usize, generators: Vec<Perm>, elements: Vec<Perm>) -> PermGroup {
        let order = elements.len();
        let find = |p: &Perm| elements.binary_search(p).expect("closed under products");
        let table = (order <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(order * order);
            for a in &elements {
                for b in &elements {
                    t.push(find(&a.compose(b)) as u16);
                }
            }
            t
        });
        let inverses = elements.iter().map(|p| find(&p.inverse())).collect();
        let mut gen_indices: Vec<usize> = Vec::new();
        for g in &generators {
            let i = find(g);
            if i != 0 && !gen_indices.contains(&i) {
                gen_indices.push(i);
            }
        }
        PermGroup {
            degree,
            generators,
            elements,
            table,
            inverses,
            gen_indices,
        }
    }

    pub fn trivial(n: usize) -> PermGroup {
        PermGroup::from_sorted(n, Vec::new(), vec![Perm::identity(n)])
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Indices of the distinct non-identity generators.
    pub fn generator_indices(&self) -> &[usize] {
        &self.gen_indices
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    #[inline]
    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        if p.degree() != self.degree {
            return None;
        }
        self.elements.binary_search(p).ok()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.order() + b] as usize,
            None => self
                .index_of(&self.elements[a].compose(&self.elements[b]))
                .expect("closed under products"),
        }
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `x g x^{-1}`
    pub fn conjugate(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(x, g), self.inv(x))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// Sorted element indices of the cyclic subgroup generated by `g`.
    pub fn cyclic_subgroup(&self, g: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut x = g;
        while x != 0 {
            out.push(x);
            x = self.mul(x, g);
        }
        out.sort_unstable();
        out
    }

    /// Whether every element of `h` (same degree) lies in `self`.
    pub fn contains_group(&self, h: &PermGroup) -> bool {
        h.degree == self.degree && h.generators.iter().all(|g| self.index_of(g).is_some())
    }

    /// The subgroup generated by `gens`, which must lie in `self`.
    pub fn subgroup(&self, gens: &[Perm]) -> Result<PermGroup> {
        for g in gens {
            if self.index_of(g).is_none() {
                return Err(invalid!("{g} is not an element of the group"));
            }
        }
        PermGroup::closure_with_cap(self.degree, gens, self.order())
    }

    /// Points fixed by every element.
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.degree)
            .filter(|&i| self.generators.iter().all(|g| g.fixes(i)))
            .collect()
    }

    /// One generator per conjugacy class of cyclic subgroups, scanning
    /// elements in index order (so the identity comes first).
    pub fn cyclic_subgroup_reps(&self) -> Vec<Perm> {
        let mut marked: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut reps = Vec::new();
        for g in 0..self.order() {
            let sub = self.cyclic_subgroup(g);
            if marked.contains(&sub) {
                continue;
            }
            reps.push(self.elements[g].clone());
            for x in 0..self.order() {
                let mut conj: Vec<usize> = sub.iter().map(|&h| self.conjugate(x, h)).collect();
                conj.sort_unstable();
                marked.insert(conj);
            }
        }
        reps
    }

    /// Representatives of the conjugacy classes of subgroups of order at
    /// most `max_order`, sorted by order.
    pub fn subgroup_classes(&self, max_order: usize) -> Vec<PermGroup> {
        let order = self.order();
        let words = order.div_ceil(64);
        let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
        let mut trivial = vec![0u64; words];
        trivial[0] = 1;
        seen.insert(trivial.clone());
        let mut reps: Vec<(Vec<usize>, Vec<u64>, usize)> = vec![(Vec::new(), trivial, 1)];
        let mut next = 0;
        while next < reps.len() {
            let (gens, bits, _) = reps[next].clone();
            next += 1;
            for g in 0..order {
                if bits[g / 64] >> (g % 64) & 1 == 1 {
                    continue;
                }
                let mut ext_gens = gens.clone();
                ext_gens.push(g);
                let Some((ext_bits, members)) = self.closure_bits(&ext_gens, max_order) else {
                    continue;
                };
                if seen.contains(&ext_bits) {
                    continue;
                }
                for x in 0..order {
                    let mut conj = vec![0u64; words];
                    for &h in &members {
                        let c = self.conjugate(x, h);
                        conj[c / 64] |= 1 << (c % 64);
                    }
                    seen.insert(conj);
                }
                let size = members.len();
                reps.push((ext_gens, ext_bits, size));
            }
        }
        let mut indexed: Vec<(usize, usize)> = reps.iter().enumerate().map(|(i, r)| (r.2, i)).collect();
        indexed.sort_unstable();
        indexed
            .into_iter()
            .map(|(_, i)| {
                let gens: Vec<Perm> = reps[i].0.iter().map(|&g| self.elements[g].clone()).collect();
                PermGroup::closure_with_cap(self.degree, &gens, max_order).expect("order already bounded")
            })
            .collect()
    }

    fn closure_bits(&self, gens: &[usize], max_order: usize) -> Option<(Vec<u64>, Vec<usize>)> {
        let mut bits = vec![0u64; self.order().div_ceil(64)];
        bits[0] = 1;
        let mut members = vec![0usize];
        let mut head = 0;
        while head < members.len() {
            let x = members[head];
            head += 1;
            for &s in gens {
                let y = self.mul(x, s);
                if bits[y / 64] >> (y % 64) & 1 == 0 {
                    if members.len() == max_order {
                        return None;
                    }
                    bits[y / 64] |= 1 << (y % 64);
                    members.push(y);
                }
            }
        }
        Some((bits, members))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, text: &str) -> Perm {
        Perm::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn closure_orders() {
        assert_eq!(group_closure(3, &[cyc(3, "(1 2 3)")]).unwrap().order(), 3);
        let s6 = group_closure(6, &[cyc(6, "(1 2 3 4 5 6)"), cyc(6, "(1 2)")]).unwrap();
        assert_eq!(s6.order(), 720);
        assert_eq!(group_closure(6, &[]).unwrap().order(), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let gens = [cyc(8, "(1 2 3 4 5 6 7 8)"), cyc(8, "(1 2)")];
        assert!(matches!(
            PermGroup::closure(8, &gens),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn parsing_round_trips() {
        let gens = parse_generators("(1 2)(5 6), (3 4)(5 6)", Some(6)).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0].to_cycle_string(), "(1 2)(5 6)");
        assert!(parse_generators("(1 2", None).is_err());
        assert!(parse_generators("(1 1)", None).is_err());
        assert!(parse_generators("(1 7)", Some(6)).is_err());
        assert!(Perm::parse_cycles("()", 4).unwrap().is_identity());
    }

    #[test]
    fn cyclic_reps_small_cases() {
        let s3 = group_closure(3, &[cyc(3, "(1 2 3)"), cyc(3, "(1 2)")]).unwrap();
        let reps = s3.cyclic_subgroup_reps();
        assert_eq!(reps.len(), 3);
        assert!(reps[0].is_identity());
        let klein = group_closure(6, &[cyc(6, "(1 2)(5 6)"), cyc(6, "(3 4)(5 6)")]).unwrap();
        assert_eq!(klein.cyclic_subgroup_reps().len(), 4);
        assert_eq!(PermGroup::trivial(4).cyclic_subgroup_reps().len(), 1);
    }

    #[test]
    fn s6_cyclic_classes_match_cycle_types() {
        // cyclic subgroups of S_n up to conjugacy correspond to cycle types
        let s6 = group_closure(6, &[cyc(6, "(1 2 3 4 5 6)"), cyc(6, "(1 2)")]).unwrap();
        let reps = s6.cyclic_subgroup_reps();
        let types: BTreeSet<Vec<usize>> = reps.iter().map(Perm::cycle_type).collect();
        assert_eq!(types.len(), reps.len());
        assert_eq!(reps.len(), 11);
    }

    #[test]
    fn s4_subgroup_classes() {
        let s4 = group_closure(4, &[cyc(4, "(1 2 3 4)"), cyc(4, "(1 2)")]).unwrap();
        let classes = s4.subgroup_classes(24);
        // S4 has 11 conjugacy classes of subgroups
        assert_eq!(classes.len(), 11);
        let orders: Vec<usize> = classes.iter().map(PermGroup::order).collect();
        assert_eq!(orders, vec![1, 2, 2, 3, 4, 4, 4, 6, 8, 12, 24]);
    }
}
