//! The verification grid: each criterion is a list of independent tasks,
//! so callers can run them sequentially or in parallel.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::central::CentralExt;
use crate::cohomology::{connecting1, cup11, CohomologyOptions, CupConvention, ShortExactSequence, H1, H2};
use crate::error::Result;
use crate::galois::{discriminant, frobenius_scan, Certification, IntPoly};
use crate::gmodule::GModule;
use crate::linalg::Matrix;
use crate::perm::{parse_generators, Perm, PermGroup};
use crate::ring::Zm;
use crate::theta::{build_theta, build_theta_from_generators, jacobian_identity_check, local_report, theta_class};
use crate::ucons::{
    equivariant_alternating_forms, obstruction_class, quadratic_refinement, selfcup_check, FormKind,
};

/// The genus-2 curve `y^2 = x^6 + x + 6`.
pub const EXAMPLE_POLY: &str = "6,1,0,0,0,0,1";
pub const EXAMPLE_DISCRIMINANT: i64 = -362_793_931;
/// Decomposition group of the genus-2 example over the 3-adics, as it acts on
/// the roots `{+-i}, {+-sqrt 3}, {+-sqrt -3}`.
pub const KLEIN_EXAMPLE: &str = "(1 2)(5 6), (3 4)(5 6)";
pub const S6_GENERATORS: &str = "(1 2 3 4 5 6), (1 2)";

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub cohomology: CohomologyOptions,
    pub convention: CupConvention,
    pub prime_bound: u64,
    pub random_instances: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            cohomology: CohomologyOptions::default(),
            convention: CupConvention::Standard,
            prime_bound: 2000,
            random_instances: 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            label: label.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn from_result(label: String, r: Result<(bool, String)>) -> Check {
        match r {
            Ok((passed, detail)) => Check::new(label, passed, detail),
            Err(e) => Check::new(label, false, format!("error: {e}")),
        }
    }
}

type Job = Box<dyn Fn(&SuiteOptions) -> Check + Send + Sync>;

pub struct Task {
    pub label: String,
    job: Job,
}

impl Task {
    fn new<F>(label: impl Into<String>, job: F) -> Task
    where
        F: Fn(&SuiteOptions) -> Check + Send + Sync + 'static,
    {
        Task {
            label: label.into(),
            job: Box::new(job),
        }
    }

    pub fn run(&self, opts: &SuiteOptions) -> Check {
        (self.job)(opts)
    }
}

pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub tasks: Vec<Task>,
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One line: `criterion N [PASS|FAIL] title (k/n checks)`.
    pub fn summary_line(&self) -> String {
        let ok = self.checks.iter().filter(|c| c.passed).count();
        format!(
            "criterion {:>2} [{}] {} ({}/{} checks)",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            ok,
            self.checks.len()
        )
    }
}

impl Criterion {
    pub fn run_sequential(&self, opts: &SuiteOptions) -> CriterionReport {
        self.report(self.tasks.iter().map(|t| t.run(opts)).collect())
    }

    pub fn report(&self, checks: Vec<Check>) -> CriterionReport {
        CriterionReport {
            id: self.id,
            title: self.title,
            checks,
        }
    }
}

pub const CRITERIA: [u8; 10] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10];

pub fn criterion(id: u8) -> Result<Criterion> {
    match id {
        1 => selfcup_criterion(),
        2 => Ok(bockstein_criterion()),
        3 => Ok(commutator_criterion()),
        4 => Ok(cyclic_rank_criterion()),
        5 => refinement_criterion(),
        6 => Ok(cyclic_theta_criterion()),
        7 => Ok(example_b_criterion()),
        8 => Ok(example_a_criterion()),
        9 => identity_criterion(),
        10 => weierstrass_criterion(),
        _ => Err(crate::error::Error::Validation(format!("no criterion {id}"))),
    }
}

fn group(n: usize, gens: &str) -> Result<Arc<PermGroup>> {
    let gens = parse_generators(gens, Some(n))?;
    Ok(Arc::new(PermGroup::closure(n, &gens)?))
}

/// Small groups of the grid; all but `Q8` act on six points so that `W0`
/// of genus 2 restricts to them. `Q8` acts regularly on eight points.
pub fn grid_groups() -> Result<Vec<(&'static str, Arc<PermGroup>)>> {
    Ok(vec![
        ("Z2", group(6, "(1 2)")?),
        ("Z3", group(6, "(1 2 3)")?),
        ("Z4", group(6, "(1 2 3 4)")?),
        ("Klein", group(6, "(1 2)(3 4), (1 3)(2 4)")?),
        ("S3", group(6, "(1 2 3), (1 2)")?),
        ("D4", group(6, "(1 2 3 4), (1 3)")?),
        ("Q8", group(8, "(1 3 2 4)(5 7 6 8), (1 5 2 6)(3 8 4 7)")?),
        ("S4", group(6, "(1 2 3 4), (1 2)")?),
    ])
}

/// Permutation module on the cosets of `sub`.
pub fn coset_module(g: &Arc<PermGroup>, sub: &PermGroup, ring: Zm) -> Result<GModule> {
    let members: Vec<usize> = sub
        .elements()
        .iter()
        .map(|h| g.index_of(h).ok_or_else(|| crate::error::Error::Validation("not a subgroup".into())))
        .collect::<Result<_>>()?;
    let n = g.order();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    for x in 0..n {
        if label[x] != usize::MAX {
            continue;
        }
        for &h in &members {
            label[g.mul(x, h)] = count;
        }
        count += 1;
    }
    let rep: Vec<usize> = (0..count).map(|c| label.iter().position(|&l| l == c).expect("nonempty coset")).collect();
    let mats: Vec<Matrix> = g
        .generator_indices()
        .iter()
        .map(|&s| {
            let mut m = Matrix::zeros(count, count);
            for (c, &x) in rep.iter().enumerate() {
                m.set(label[g.mul(s, x)], c, 1);
            }
            m
        })
        .collect();
    GModule::new(g.clone(), ring, count, &mats)
}

/// Character with value `-1` on generators outside an index-2 subgroup.
fn sign_character(g: &Arc<PermGroup>, sub: &PermGroup, ring: Zm) -> Result<GModule> {
    let scalars: Vec<i64> = g
        .generators()
        .iter()
        .map(|s| if sub.index_of(s).is_some() { 1 } else { -1 })
        .collect();
    GModule::character(g.clone(), ring, &scalars)
}

#[derive(Clone, Debug)]
pub struct GridCell {
    pub group: &'static str,
    pub module: String,
    pub data: GModule,
}

impl GridCell {
    pub fn label(&self) -> String {
        format!("{} / {}", self.group, self.module)
    }
}

/// Modules of the grid: trivial F2, permutation modules on cosets of index
/// 2 (swap), 3 and 4, the restriction of `W0`, one F3 and one Z/4 module.
pub fn grid_cells() -> Result<Vec<GridCell>> {
    let f2 = Zm::F2;
    let f3 = Zm::new(3)?;
    let z4 = Zm::new(4)?;
    let mut cells = Vec::new();
    for (name, g) in grid_groups()? {
        let mut push = |module: String, data: GModule| {
            cells.push(GridCell {
                group: name,
                module,
                data,
            })
        };
        push("trivial F2".into(), GModule::trivial(g.clone(), f2, 1));
        let order = g.order();
        let subs = g.subgroup_classes(order);
        let mut index_two = None;
        for (k, h) in subs.iter().enumerate() {
            let index = order / h.order();
            if !(2..=4).contains(&index) {
                continue;
            }
            let kind = if index == 2 { "swap" } else { "permutation" };
            push(format!("{kind} F2^{index} (subgroup class {k})"), coset_module(&g, h, f2)?);
            if index == 2 && index_two.is_none() {
                index_two = Some(h.clone());
            }
        }
        let genus = (g.degree() - 2) / 2;
        push(format!("W0 genus {genus}"), build_theta(genus, g.clone())?.w0().clone());
        match &index_two {
            Some(h) => push("sign F3".into(), sign_character(&g, h, f3)?),
            None => push("trivial F3".into(), GModule::trivial(g.clone(), f3, 1)),
        }
        push("trivial Z/4".into(), GModule::trivial(g.clone(), z4, 1));
    }
    Ok(cells)
}

fn selfcup_criterion() -> Result<Criterion> {
    let mut tasks: Vec<Task> = grid_cells()?
        .into_iter()
        .map(|cell| {
            let label = cell.label();
            Task::new(label.clone(), move |opts| {
                let r = selfcup_check(&cell.data, &opts.cohomology, opts.convention).map(|rep| {
                    let detail = format!(
                        "dim H1 = {}, {} classes ({}), {} witnesses",
                        rep.log_h1,
                        rep.classes_checked,
                        if rep.exhaustive { "all" } else { "sampled" },
                        rep.witnesses_found
                    );
                    (rep.passed() && rep.classes_checked > 0, detail)
                });
                Check::from_result(label.clone(), r)
            })
        })
        .collect();
    // the comparison must be able to fail: ignoring the action in the cup
    // product has to be caught somewhere on the grid
    tasks.push(Task::new("negative control", |opts| {
        let r = (|| -> Result<(bool, String)> {
            let mut caught = Vec::new();
            for cell in grid_cells()? {
                let rep = selfcup_check(&cell.data, &opts.cohomology, CupConvention::IgnoreAction)?;
                if !rep.passed() {
                    caught.push(cell.label());
                }
            }
            Ok((!caught.is_empty(), format!("corrupted cup caught on {}", caught.join(", "))))
        })();
        Check::from_result("negative control".into(), r)
    }));
    Ok(Criterion {
        id: 1,
        title: "connecting map of UM equals the cup square",
        tasks,
    })
}

fn bockstein_criterion() -> Criterion {
    let groups = [("Z2", "(1 2)", 2), ("Z4", "(1 2 3 4)", 4), ("Klein", "(1 2)(3 4), (1 3)(2 4)", 4)];
    let tasks = groups
        .iter()
        .map(|&(name, gens, n)| {
            Task::new(name, move |opts| {
                let r = (|| -> Result<(bool, String)> {
                    let g = group(n, gens)?;
                    let f2 = GModule::trivial(g.clone(), Zm::F2, 1);
                    let z4 = GModule::trivial(g.clone(), Zm::new(4)?, 1);
                    let ses = ShortExactSequence::new(
                        f2.clone(),
                        z4,
                        f2.clone(),
                        Matrix::from_row_major(1, 1, &[2], Zm::new(4)?),
                        Matrix::from_row_major(1, 1, &[1], Zm::F2),
                    )?;
                    let h2 = H2::new(&f2.tensor_square());
                    let classes = H1::new(&f2).space(&opts.cohomology).classes;
                    let mut ok = 0;
                    for x in &classes {
                        let b = connecting1(&ses, x)?;
                        let sq = cup11(&f2, x, &f2, x)?;
                        if h2.cohomologous(&b, &sq).is_some() {
                            ok += 1;
                        }
                    }
                    Ok((ok == classes.len(), format!("{ok}/{} classes", classes.len())))
                })();
                Check::from_result(name.into(), r)
            })
        })
        .collect();
    Criterion {
        id: 2,
        title: "Bockstein of 0 -> Z/2 -> Z/4 -> Z/2 -> 0 is the cup square",
        tasks,
    }
}

fn plane(g: &Arc<PermGroup>, ring: Zm, swapping: bool) -> Result<GModule> {
    let mats: Vec<Matrix> = (0..g.generators().len())
        .map(|k| {
            if swapping && k == 0 {
                Matrix::from_row_major(2, 2, &[0, 1, 1, 0], ring)
            } else {
                Matrix::identity(2)
            }
        })
        .collect();
    GModule::new(g.clone(), ring, 2, &mats)
}

fn line(g: &Arc<PermGroup>, ring: Zm, sign: bool) -> Result<GModule> {
    let scalars: Vec<i64> = (0..g.generators().len()).map(|k| if sign && k == 0 { -1 } else { 1 }).collect();
    GModule::character(g.clone(), ring, &scalars)
}

/// The extensions of the commutator suite over `g`: split, Z/4, D4 and the
/// Heisenberg group over F3, with the swap action where the factor set allows it.
pub fn commutator_extensions(g: &Arc<PermGroup>, swap_available: bool) -> Result<Vec<(String, CentralExt)>> {
    let f2 = Zm::F2;
    let f3 = Zm::new(3)?;
    let heis = |c: &[u8], d: &[u8]| {
        let v = 2 * (c[0] as i32 * d[1] as i32 - c[1] as i32 * d[0] as i32);
        vec![v.rem_euclid(3) as u8]
    };
    let mut out = vec![
        ("split".to_string(), CentralExt::new(line(g, f2, false)?, plane(g, f2, false)?, |_, _| vec![0])?),
        ("Z/4".to_string(), CentralExt::new(line(g, f2, false)?, line(g, f2, false)?, |c, d| vec![c[0] * d[0]])?),
        ("D4".to_string(), CentralExt::new(line(g, f2, false)?, plane(g, f2, false)?, |c, d| vec![c[0] * d[1]])?),
        ("Heisenberg F3".to_string(), CentralExt::new(line(g, f3, false)?, plane(g, f3, false)?, heis)?),
    ];
    if swap_available {
        out.push(("split, swap".into(), CentralExt::new(line(g, f2, false)?, plane(g, f2, true)?, |_, _| vec![0])?));
        out.push(("Heisenberg F3, swap".into(), CentralExt::new(line(g, f3, true)?, plane(g, f3, true)?, heis)?));
    }
    Ok(out)
}

fn commutator_criterion() -> Criterion {
    let groups = [("Z2", "(1 2)", 2, true), ("Z3", "(1 2 3)", 3, false), ("Klein", "(1 2)(3 4), (1 3)(2 4)", 4, true)];
    let tasks = groups
        .iter()
        .map(|&(name, gens, n, swap)| {
            Task::new(name, move |opts| {
                let r = (|| -> Result<(bool, String)> {
                    let g = group(n, gens)?;
                    let mut pairs = 0;
                    let mut failed = Vec::new();
                    let mut detectable = 0;
                    let mut nontrivial = 0;
                    for (ename, e) in commutator_extensions(&g, swap)? {
                        let classes = H1::new(e.quotient()).space(&opts.cohomology).classes;
                        for a in &classes {
                            for b in &classes {
                                let v = e.commutator_identity_check(a, b)?;
                                pairs += 1;
                                detectable += usize::from(v.sign_detectable());
                                nontrivial += usize::from(!v.defect_is_coboundary);
                                if !v.matches_minus && !failed.contains(&ename) {
                                    failed.push(ename.clone());
                                }
                            }
                        }
                    }
                    let detail = format!(
                        "{pairs} pairs, {nontrivial} with nonzero defect, sign detectable on {detectable}{}",
                        if failed.is_empty() { String::new() } else { format!("; failed: {}", failed.join(", ")) }
                    );
                    Ok((failed.is_empty(), detail))
                })();
                Check::from_result(name.into(), r)
            })
        })
        .collect();
    Criterion {
        id: 3,
        title: "q(g1+g2) - q(g1) - q(g2) ~ -[g1 u g2]",
        tasks,
    }
}

/// Smallest cyclic permutation group of order `o`: one cycle per prime power.
fn cyclic_group_of_order(o: usize) -> Result<PermGroup> {
    let mut cycles = Vec::new();
    let mut rest = o;
    let mut start = 0;
    let mut p = 2;
    while rest > 1 {
        if rest % p == 0 {
            let mut q = 1;
            while rest % p == 0 {
                rest /= p;
                q *= p;
            }
            cycles.push((start..start + q).collect::<Vec<_>>());
            start += q;
        }
        p += 1;
    }
    let n = start.max(1);
    let gen = Perm::from_cycles(n, &cycles)?;
    PermGroup::closure(n, &[gen])
}

fn matrix_order(a: &Matrix, ring: Zm) -> usize {
    let mut x = a.clone();
    let mut k = 1;
    while !x.is_identity() {
        x = x.mul(a, ring);
        k += 1;
    }
    k
}

fn count_fixed(a: &Matrix, ring: Zm) -> usize {
    let m = ring.modulus() as usize;
    let d = a.rows();
    (0..m.pow(d as u32))
        .filter(|&code| {
            let v: Vec<u8> = (0..d).map(|i| ((code / m.pow(i as u32)) % m) as u8).collect();
            a.apply(&v, ring) == v
        })
        .count()
}

fn cyclic_rank_instance(seed: u64, k: usize) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let m = [2u32, 3, 5][rng.gen_range(0..3)];
    let ring = Zm::new(m)?;
    let d = rng.gen_range(1..=4);
    let a = loop {
        let entries: Vec<i64> = (0..d * d).map(|_| rng.gen_range(0..m as i64)).collect();
        let a = Matrix::from_row_major(d, d, &entries, ring);
        if a.is_invertible(ring) {
            break a;
        }
    };
    let o = matrix_order(&a, ring);
    let g = Arc::new(cyclic_group_of_order(o)?);
    let module = GModule::new(g.clone(), ring, d, core::slice::from_ref(&a))?;
    let gen = g.generator_indices().first().copied().unwrap_or(0);
    let (inv, dual_inv) = module.cyclic_rank_check(gen);
    // brute-force counts of fixed vectors of A and of A^T
    let fixed = count_fixed(&a, ring);
    let fixed_t = count_fixed(&a.transpose(), ring);
    let expect = |log: u32| (m as usize).pow(log);
    let ok = inv == dual_inv && expect(inv) == fixed && expect(dual_inv) == fixed_t;
    Ok((ok, format!("m = {m}, dim {d}, order {o}: {inv} / {dual_inv}")))
}

fn cyclic_rank_criterion() -> Criterion {
    // the instance count is read at run time, so one task holds them all
    let tasks = vec![Task::new("random cyclic instances", |opts| {
        let mut failures = Vec::new();
        for k in 0..opts.random_instances {
            match cyclic_rank_instance(opts.cohomology.seed, k) {
                Ok((true, _)) => {}
                Ok((false, d)) => failures.push(d),
                Err(e) => failures.push(format!("error: {e}")),
            }
        }
        Check::new(
            "random cyclic instances",
            failures.is_empty() && opts.random_instances > 0,
            format!("{} instances, {} failures {}", opts.random_instances, failures.len(), failures.join("; ")),
        )
    })];
    Criterion {
        id: 4,
        title: "invariants of a cyclic group on M and on its dual have equal rank",
        tasks,
    }
}

fn refinement_criterion() -> Result<Criterion> {
    let mut cells: Vec<GridCell> =
        grid_cells()?.into_iter().filter(|c| c.data.ring() == Zm::F2 && c.data.dim() <= 4).collect();
    // every obstruction on the grid vanishes; these two add nonvanishing ones
    for (name, gens) in [("Klein example", KLEIN_EXAMPLE), ("S6", S6_GENERATORS)] {
        cells.push(GridCell {
            group: name,
            module: "W0 genus 2".into(),
            data: build_theta_from_generators(2, gens)?.w0().clone(),
        });
    }
    let mut tasks: Vec<Task> = cells
        .into_iter()
        .map(|cell| {
            let label = cell.label();
            Task::new(label.clone(), move |_| {
                let r = (|| -> Result<(bool, String)> {
                    let m = &cell.data;
                    let mut targets = vec![GModule::trivial(m.group().clone(), Zm::F2, 1)];
                    if m.dim() <= 2 {
                        targets.push(m.clone());
                    }
                    let (mut forms, mut zero, mut mismatches) = (0, 0, 0);
                    for n in &targets {
                        for beta in equivariant_alternating_forms(m, n, 1 << 16)? {
                            let (hom, c) = obstruction_class(&beta, FormKind::Alternating)?;
                            let vanishes = H1::new(&hom).is_coboundary(&c);
                            let refined = quadratic_refinement(&beta)?.is_some();
                            forms += 1;
                            zero += usize::from(vanishes);
                            mismatches += usize::from(vanishes != refined);
                        }
                    }
                    Ok((mismatches == 0, format!("{forms} forms, {zero} with vanishing obstruction")))
                })();
                Check::from_result(label.clone(), r)
            })
        })
        .collect();
    tasks.push(Task::new("nonvanishing case", |_| {
        let r = build_theta_from_generators(2, KLEIN_EXAMPLE).and_then(|d| {
            let (hom, c) = obstruction_class(d.e2(), FormKind::Alternating)?;
            let vanishes = H1::new(&hom).is_coboundary(&c);
            let refined = quadratic_refinement(d.e2())?.is_some();
            Ok((!vanishes && !refined, format!("Weil pairing: obstruction vanishes {vanishes}, refinement {refined}")))
        });
        Check::from_result("nonvanishing case".into(), r)
    }));
    Ok(Criterion {
        id: 5,
        title: "obstruction class vanishes iff an equivariant quadratic refinement exists",
        tasks,
    })
}

fn cyclic_theta_criterion() -> Criterion {
    let tasks = vec![Task::new("S6 cyclic subgroups", |_| {
        let r = (|| -> Result<(bool, String)> {
            let data = build_theta_from_generators(2, S6_GENERATORS)?;
            let report = local_report(&data)?;
            let types: Vec<String> = report
                .rows
                .iter()
                .map(|r| format!("{}:{}", r.generator.to_cycle_string(), r.fixed_points))
                .collect();
            let ok = report.rows.len() == 11 && report.rows.iter().all(|r| r.trivial && r.fixed_points > 0);
            Ok((ok, format!("{} classes; fixed points {}", report.rows.len(), types.join(" "))))
        })();
        Check::from_result("S6 cyclic subgroups".into(), r)
    })];
    Criterion {
        id: 6,
        title: "c_T restricts to zero on every cyclic subgroup of S6",
        tasks,
    }
}

fn example_b_criterion() -> Criterion {
    let tasks = vec![
        Task::new("discriminant", |_| {
            let r = IntPoly::parse(EXAMPLE_POLY).and_then(|f| discriminant(&f)).map(|d| {
                let ok = d == num_bigint::BigInt::from(EXAMPLE_DISCRIMINANT);
                (ok, format!("disc = {d}"))
            });
            Check::from_result("discriminant".into(), r)
        }),
        Task::new("Galois group S6", |opts| {
            let r = IntPoly::parse(EXAMPLE_POLY).and_then(|f| frobenius_scan(&f, opts.prime_bound)).map(|s| {
                let witnesses: Vec<String> = s
                    .observed
                    .iter()
                    .filter_map(|t| s.witness(t).map(|p| format!("{t}@{p}")))
                    .collect();
                (
                    s.certification == Certification::Full,
                    format!("bound {}, types {}", s.bound, witnesses.join(" ")),
                )
            });
            Check::from_result("Galois group S6".into(), r)
        }),
        Task::new("c_T nonzero, locally trivial", |_| {
            let r = build_theta_from_generators(2, S6_GENERATORS).and_then(|d| local_report(&d)).map(|rep| {
                let ok = !rep.globally_trivial && rep.rows.iter().all(|r| r.trivial) && rep.sha_style;
                (ok, format!("global trivial: {}, sha-style: {}", rep.globally_trivial, rep.sha_style))
            });
            Check::from_result("c_T nonzero, locally trivial".into(), r)
        }),
    ];
    Criterion {
        id: 7,
        title: "genus-2 curve y^2 = x^6 + x + 6",
        tasks,
    }
}

fn example_a_criterion() -> Criterion {
    let tasks = vec![Task::new("Klein four action", |_| {
        let r = build_theta_from_generators(2, KLEIN_EXAMPLE).and_then(|d| theta_class(&d)).map(|c| {
            (
                !c.trivial && c.fixed_points.is_empty(),
                format!("trivial: {}, fixed points: {}", c.trivial, c.fixed_points.len()),
            )
        });
        Check::from_result("Klein four action".into(), r)
    })];
    Criterion {
        id: 8,
        title: "genus-2 curve with Klein four decomposition group",
        tasks,
    }
}

fn describe_group(g: &PermGroup) -> String {
    let gens: Vec<String> = g.generators().iter().map(|p| p.to_cycle_string()).collect();
    format!("order {} <{}>", g.order(), gens.join(", "))
}

/// One subgroup per conjugacy class of `S6` of order at most 48.
pub fn small_s6_subgroups() -> Result<Vec<PermGroup>> {
    let s6 = group(6, S6_GENERATORS)?;
    Ok(s6.subgroup_classes(48))
}

fn identity_criterion() -> Result<Criterion> {
    let tasks = small_s6_subgroups()?
        .into_iter()
        .map(|h| {
            let label = describe_group(&h);
            let h = Arc::new(h);
            Task::new(label.clone(), move |opts| {
                let r = build_theta(2, h.clone()).and_then(|d| jacobian_identity_check(&d, &opts.cohomology)).map(
                    |v| {
                        (
                            v.passed() && v.cup_checked,
                            format!(
                                "{} classes ({}), c_T {}",
                                v.classes_checked,
                                if v.exhaustive { "all" } else { "sampled" },
                                if v.c_t_trivial { "trivial" } else { "nonzero" }
                            ),
                        )
                    },
                );
                Check::from_result(label.clone(), r)
            })
        })
        .collect();
    Ok(Criterion {
        id: 9,
        title: "x u x = x u c_T under e2, and c_e2 = e2(c_T)",
        tasks,
    })
}

fn weierstrass_criterion() -> Result<Criterion> {
    let mut tasks = Vec::new();
    // every subgroup fixing a root is conjugate into the stabilizer of the last root
    let stabilizer = group(6, "(1 2 3 4 5), (1 2)")?;
    for h in stabilizer.subgroup_classes(stabilizer.order()) {
        let label = format!("genus 2, {}", describe_group(&h));
        let h = Arc::new(h);
        tasks.push(Task::new(label.clone(), move |_| {
            let r = build_theta(2, h.clone())
                .and_then(|d| theta_class(&d))
                .map(|c| (c.trivial, format!("{} fixed theta characteristics", c.fixed_points.len())));
            Check::from_result(label.clone(), r)
        }));
    }
    let s4 = group(4, "(1 2 3 4), (1 2)")?;
    let mut odd: Vec<(usize, Arc<PermGroup>)> =
        s4.subgroup_classes(s4.order()).into_iter().map(|h| (1, Arc::new(h))).collect();
    for gens in [
        "(1 2 3 4 5 6 7 8)",
        "(1 2 3 4 5 6 7 8), (1 8)(2 7)(3 6)(4 5)",
        "(1 3 2 4)(5 7 6 8), (1 5 2 6)(3 8 4 7)",
        "(1 2)(3 4)(5 6)(7 8), (1 3)(2 4)(5 7)(6 8), (1 5)(2 6)(3 7)(4 8)",
        "(1 2 3 4 5 6 7), (2 3 5)(4 7 6), (1 8)(2 4)(3 7)(5 6)",
    ] {
        odd.push((3, group(8, gens)?));
    }
    for (genus, h) in odd {
        let label = format!("genus {genus}, {}", describe_group(&h));
        tasks.push(Task::new(label.clone(), move |_| {
            let r = build_theta(genus, h.clone())
                .and_then(|d| theta_class(&d))
                .map(|c| (c.trivial, format!("{} fixed theta characteristics", c.fixed_points.len())));
            Check::from_result(label.clone(), r)
        }));
    }
    Ok(Criterion {
        id: 10,
        title: "c_T = 0 with a rational Weierstrass point or odd genus",
        tasks,
    })
}
