//! Blocked staircases or brambles from a 2-colouring of `Q_N`.
//!
//! `find_blocked_or_bramble` follows the induction on the blocking level `b`:
//! recurse at `b - 1` in a `(2t+1) x (2t+1)` array of subgrids, lift each
//! blocked staircase to its component `M_z`, route connector staircases
//! between neighbouring subgrids and either find one of them blocked or join
//! the components along columns and rows into a bramble of order `t + 1`.
//! Every outcome is re-verified by [`verify_outcome`] from the partition alone.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::decomposition::{bramble_order, crosses_bramble, treewidth_at_most, validate_bramble, Bramble, Decision};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::graph::{induced, Adjacency};
use crate::grid::{anchor, build_qn, enlarge, join_staircases, Coord, GridGraph, Staircase};
use crate::separators::{blocked_component, is_blocked, minimalize, unblocking_path, Partition2};
use crate::slab::{audit_separator, AuditOptions, Slab};

/// The grid-size recurrence `N(0) = t + 2`, `N(b) = (8t + 5)(N(b-1) + b)`,
/// saturating at `u64::MAX`.
pub fn schedule(t: u32, b: u32) -> u64 {
    let mut n = t as u64 + 2;
    for level in 1..=b as u64 {
        n = (8 * t as u64 + 5).saturating_mul(n.saturating_add(level));
    }
    n
}

/// Side that the construction actually needs: the recurrence value, or the
/// extent of the anchor grid when that is larger.
pub fn required_side(t: u32, b: u32) -> u64 {
    if b == 0 {
        return t as u64 + 2;
    }
    let n0 = required_side(t, b - 1);
    let d = n0.saturating_add(b as u64);
    schedule(t, b).max((16 * t as u64).saturating_mul(d).saturating_add(n0))
}

/// `⌈√18 (t+1)⌉ - 1`, the level at which a blocked staircase certifies
/// treewidth `t` through the slab bound.
pub fn b_max(t: u32) -> u32 {
    let target = 18 * (t as u64 + 1).pow(2);
    let mut m = 0u64;
    while m * m < target {
        m += 1;
    }
    (m - 1) as u32
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrambleCertificate {
    /// Class containing every set.
    pub colour: u8,
    pub sets: Vec<Vec<Coord>>,
    /// The lifted components `M_z`, indexed `j * (2t+1) + k`. Empty for
    /// brambles found directly.
    pub components: Vec<Vec<Coord>>,
    /// Connector paths `R_yz` with their grid edges.
    pub connectors: Vec<Connector>,
    pub claimed_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connector {
    pub from: (u32, u32),
    pub to: (u32, u32),
    pub path: Vec<Coord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum BuildOutcome {
    Blocked { staircase: Staircase, b: u32, colour: u8 },
    Bramble(BrambleCertificate),
    Inconclusive { reason: String },
}

#[derive(Clone, Copy, Debug)]
pub struct BuildParams {
    pub t: u32,
    pub b: u32,
    pub colour: u8,
    /// Run below `required_side(t, b)`; results are then not guaranteed.
    pub override_schedule: bool,
    pub exec: Execution,
}

/// A cube `Q_side(origin)` inside the host.
#[derive(Clone, Copy, Debug)]
struct Region {
    origin: Coord,
    side: u32,
}

struct Ctx<'a> {
    host: &'a GridGraph,
    part: &'a Partition2,
    t: u32,
    exec: Execution,
}

/// Either a `(b, colour)`-blocked staircase or a bramble of order `t + 1`.
///
/// Below `required_side(t, b)` the call is refused unless
/// `override_schedule` is set, in which case a construction that runs out of
/// room reports `Inconclusive`.
pub fn find_blocked_or_bramble(host: &GridGraph, part: &Partition2, p: &BuildParams) -> Result<BuildOutcome> {
    if !host.is_full() || host.side() != part.n {
        return Err(Error::Precondition("host must be the full grid of the partition".into()));
    }
    part.check()?;
    if p.colour != 1 && p.colour != 2 {
        return Err(Error::Precondition(format!("colour {} is not 1 or 2", p.colour)));
    }
    let need = required_side(p.t, p.b);
    if (host.side() as u64) < need && !p.override_schedule {
        return Err(Error::Precondition(format!(
            "side {} is below the required {need} for t = {}, b = {}",
            host.side(),
            p.t,
            p.b
        )));
    }
    let ctx = Ctx {
        host,
        part,
        t: p.t,
        exec: p.exec,
    };
    let region = Region {
        origin: Coord::new(0, 0, 0),
        side: host.side(),
    };
    match ctx.find(region, p.b, p.colour) {
        Err(Error::OutOfBounds(c, _)) if p.override_schedule => Ok(BuildOutcome::Inconclusive {
            reason: format!("construction leaves the grid at {c}"),
        }),
        other => other,
    }
}

impl Ctx<'_> {
    fn find(&self, r: Region, b: u32, i: u8) -> Result<BuildOutcome> {
        if self.t == 0 {
            return self.straight_probe(r, b, i);
        }
        if b == 0 {
            return self.base_case(r, i);
        }
        let t = self.t;
        let n0 = required_side(t, b - 1) as u32;
        let d = n0 + b;
        let grid = 2 * t + 1;
        if 16 * t * d + n0 > r.side || 6 * t * d + n0 + b > r.side {
            return Ok(BuildOutcome::Inconclusive {
                reason: format!("anchor grid needs side {} but the region has {}", 16 * t * d + n0, r.side),
            });
        }
        let other = 3 - i;
        let subs = self.exec.map_range((grid * grid) as usize, |z| {
            let (j, k) = (z as u32 / grid, z as u32 % grid);
            let sub = Region {
                origin: r.origin + anchor(d, j, k),
                side: n0,
            };
            // sub-recursions stay sequential; parallelism is at the top level
            let inner = Ctx {
                host: self.host,
                part: self.part,
                t,
                exec: Execution::Sequential,
            };
            inner.find(sub, b - 1, other)
        });
        let mut stairs = Vec::with_capacity(subs.len());
        for s in subs {
            match s? {
                BuildOutcome::Blocked { staircase, .. } => stairs.push(staircase),
                done => return Ok(done),
            }
        }
        let components: Vec<Vec<Coord>> = self
            .exec
            .map_slice(&stairs, |p| blocked_component(self.host, p, b - 1, other, self.part))
            .into_iter()
            .collect::<Result<_>>()?;

        let mut edges = Vec::new();
        for j in 0..grid {
            for k in 0..grid {
                if j + 1 < grid {
                    edges.push(((j, k), (j + 1, k)));
                }
                if k + 1 < grid {
                    edges.push(((j, k), (j, k + 1)));
                }
            }
        }
        let idx = |(j, k): (u32, u32)| (j * grid + k) as usize;
        let joined: Vec<Staircase> = edges
            .iter()
            .map(|&(u, z)| join_staircases(self.host, &stairs[idx(u)], &stairs[idx(z)], b))
            .collect::<Result<_>>()?;
        check_disjoint_connectors(&edges, &joined, b)?;

        let probes = self
            .exec
            .map_slice(&joined, |p| unblocking_path(self.host, p, b, i, self.part));
        let mut connectors = Vec::with_capacity(edges.len());
        for ((&(u, z), p), probe) in edges.iter().zip(&joined).zip(probes) {
            match probe? {
                None => {
                    return Ok(BuildOutcome::Blocked {
                        staircase: p.clone(),
                        b,
                        colour: i,
                    })
                }
                Some(path) => {
                    let (lo, hi) = (p.first().x, p.last().x);
                    let interior: Vec<Coord> = path.into_iter().filter(|c| c.x != lo && c.x != hi).collect();
                    connectors.push(Connector {
                        from: u,
                        to: z,
                        path: interior,
                    });
                }
            }
        }

        let mut sets = Vec::with_capacity(grid as usize);
        for j in 0..grid {
            let mut set: BTreeSet<Coord> = BTreeSet::new();
            for k in 0..grid {
                set.extend(components[idx((j, k))].iter().copied());
                set.extend(components[idx((k, j))].iter().copied());
            }
            for c in &connectors {
                let column = c.from.0 == j && c.to.0 == j;
                let row = c.from.1 == j && c.to.1 == j;
                if column || row {
                    set.extend(c.path.iter().copied());
                }
            }
            sets.push(set.into_iter().collect());
        }
        Ok(BuildOutcome::Bramble(BrambleCertificate {
            colour: other,
            sets,
            components,
            connectors,
            claimed_order: t as usize + 1,
        }))
    }

    /// `t = 0`: a straight staircase along the bottom edge of the region.
    fn straight_probe(&self, r: Region, b: u32, i: u8) -> Result<BuildOutcome> {
        if r.side < 3 || b >= r.side {
            return Ok(BuildOutcome::Inconclusive {
                reason: format!("region of side {} is too small for level {b}", r.side),
            });
        }
        let p = Staircase::straight(r.origin, r.side)?;
        match unblocking_path(self.host, &p, b, i, self.part)? {
            None => Ok(BuildOutcome::Blocked { staircase: p, b, colour: i }),
            Some(path) => {
                // side-to-side paths have at least one interior vertex, all off A_i
                let v = path[1..path.len() - 1][0];
                Ok(BuildOutcome::Bramble(BrambleCertificate {
                    colour: 3 - i,
                    sets: vec![vec![v]],
                    components: Vec::new(),
                    connectors: Vec::new(),
                    claimed_order: 1,
                }))
            }
        }
    }

    /// `b = 0`: a three-vertex staircase through an `A_i` vertex of the plane
    /// one step into the region; if that plane avoids `A_i` it carries a
    /// crosses bramble of order `t + 1` in the other class.
    fn base_case(&self, r: Region, i: u8) -> Result<BuildOutcome> {
        let o = r.origin;
        if r.side < 3 {
            return Ok(BuildOutcome::Inconclusive {
                reason: format!("base region of side {} is too small", r.side),
            });
        }
        for y in 0..r.side {
            for z in 0..r.side {
                let v = o + Coord::new(1, y, z);
                if self.part.of(v) == i {
                    let p = Staircase::new(vec![o + Coord::new(0, y, z), v, o + Coord::new(2, y, z)])?;
                    return Ok(BuildOutcome::Blocked { staircase: p, b: 0, colour: i });
                }
            }
        }
        let m = self.t + 1;
        if m > r.side {
            return Ok(BuildOutcome::Inconclusive {
                reason: "plane too small for a crosses bramble".into(),
            });
        }
        let (plane, b) = crosses_bramble(m)?;
        let lift = |v: usize| {
            let c = plane.coord(v);
            o + Coord::new(1, c.x, c.y)
        };
        Ok(BuildOutcome::Bramble(BrambleCertificate {
            colour: 3 - i,
            sets: b.sets.iter().map(|s| s.iter().map(|&v| lift(v)).collect()).collect(),
            components: Vec::new(),
            connectors: Vec::new(),
            claimed_order: m as usize,
        }))
    }
}

type ConnectorEdge = ((u32, u32), (u32, u32));

/// b-enlargements of connectors for edges without a common end must be
/// vertex-disjoint.
fn check_disjoint_connectors(edges: &[ConnectorEdge], joined: &[Staircase], b: u32) -> Result<()> {
    let mut owner: HashMap<Coord, Vec<usize>> = HashMap::new();
    for (e, p) in joined.iter().enumerate() {
        for &v in p.vertices() {
            for c in crate::grid::b_square(v, b) {
                owner.entry(c).or_default().push(e);
            }
        }
    }
    for list in owner.values() {
        for (a, &e) in list.iter().enumerate() {
            for &f in &list[a + 1..] {
                let (u, z) = edges[e];
                let (u2, z2) = edges[f];
                if u != u2 && u != z2 && z != u2 && z != z2 {
                    return Err(Error::Invariant(format!(
                        "enlargements of connectors {:?} and {:?} overlap",
                        edges[e], edges[f]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Independent re-check of an outcome against the partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCheck {
    pub valid: bool,
    /// Treewidth lower bound on the witnessing class implied by the evidence.
    pub tw_lower: i64,
    pub colour: Option<u8>,
    pub bramble_order: Option<usize>,
    pub max_multiplicity: Option<usize>,
    pub notes: Vec<String>,
}

/// Re-verifies a builder outcome using only the partition: blocked
/// staircases with the blocking test, brambles with membership, pairwise
/// connectivity, the two-sets-per-vertex cap and an exact order computation.
pub fn verify_outcome(host: &GridGraph, part: &Partition2, outcome: &BuildOutcome, t: u32) -> Result<OutcomeCheck> {
    match outcome {
        BuildOutcome::Blocked { staircase, b, colour } => {
            let ok = is_blocked(host, staircase, *b, *colour, part)?;
            Ok(OutcomeCheck {
                valid: ok,
                tw_lower: if ok { 0 } else { -1 },
                colour: Some(*colour),
                bramble_order: None,
                max_multiplicity: None,
                notes: if ok { Vec::new() } else { vec!["staircase is not blocked".into()] },
            })
        }
        BuildOutcome::Bramble(cert) => {
            let mut notes = Vec::new();
            let all: BTreeSet<Coord> = cert.sets.iter().flatten().copied().collect();
            if let Some(c) = all.iter().find(|c| !host.contains(**c)) {
                return Err(Error::OutOfBounds(*c, host.side()));
            }
            let in_class = all.iter().all(|&c| part.of(c) == cert.colour);
            if !in_class {
                notes.push(format!("a set leaves class {}", cert.colour));
            }
            let g = host.induced(all.iter().copied())?;
            let b = Bramble::new(cert.sets.iter().map(|s| g.indices_of(s)).collect());
            let valid_bramble = validate_bramble(&g, &b);
            if !valid_bramble {
                notes.push("sets do not pairwise touch".into());
            }
            let mut count: HashMap<Coord, usize> = HashMap::new();
            for s in &cert.sets {
                for &c in s {
                    *count.entry(c).or_default() += 1;
                }
            }
            let mult = count.values().copied().max().unwrap_or(0);
            let cap_ok = cert.sets.len() == 1 || cert.components.is_empty() || mult <= 2;
            if !cap_ok {
                notes.push(format!("a vertex lies in {mult} sets"));
            }
            let order = bramble_order(&g, &b)?;
            let order_ok = order > t as usize && order >= cert.claimed_order;
            if !order_ok {
                notes.push(format!("order {order} is below {}", t + 1));
            }
            let valid = in_class && valid_bramble && cap_ok && order_ok;
            Ok(OutcomeCheck {
                valid,
                tw_lower: if valid { order as i64 - 1 } else { -1 },
                colour: Some(cert.colour),
                bramble_order: Some(order),
                max_multiplicity: Some(mult),
                notes,
            })
        }
        BuildOutcome::Inconclusive { reason } => Ok(OutcomeCheck {
            valid: false,
            tw_lower: -1,
            colour: None,
            bramble_order: None,
            max_multiplicity: None,
            notes: vec![reason.clone()],
        }),
    }
}

/// Treewidth evidence for one colour class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassWidth {
    pub colour: u8,
    pub size: usize,
    /// Proven lower bound.
    pub lower: i64,
    /// Width of a decomposition found, if any.
    pub upper: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub n: u32,
    pub t: u32,
    pub classes: Vec<ClassWidth>,
    pub outcome: Option<BuildOutcome>,
    pub outcome_check: Option<OutcomeCheck>,
    /// Separator audit of a blocked staircase's enlargement, when run.
    pub slab_bound: Option<i64>,
    /// A class with certified treewidth at least `t`.
    pub witness: Option<u8>,
    /// Parts skipped because a guard was hit.
    pub partial: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct CertifyOptions {
    /// Budget for direct width refutations on each class.
    pub budget: Option<u64>,
    /// Run the builder at this level (needs `required_side` or `override`).
    pub build_level: Option<u32>,
    pub override_schedule: bool,
    pub exec: Execution,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            budget: Some(1_000_000),
            build_level: None,
            override_schedule: false,
            exec: Execution::best(),
        }
    }
}

/// Evidence that one class of `part` has treewidth at least `t`: a direct
/// refutation of width `t - 1` on each class, and optionally the builder's
/// outcome re-verified from scratch.
pub fn certify_partition(part: &Partition2, t: u32, opts: &CertifyOptions) -> Result<PartitionReport> {
    part.check()?;
    let host = build_qn(part.n)?;
    let mut partial = Vec::new();
    let mut classes = Vec::with_capacity(2);
    for colour in [1u8, 2] {
        let members = part.members(colour);
        let (h, _) = induced(&host, &members);
        let mut cw = ClassWidth {
            colour,
            size: members.len(),
            lower: if members.is_empty() { -1 } else if h.edge_count() == 0 { 0 } else { 1 },
            upper: if members.is_empty() { Some(-1) } else { None },
        };
        if t as i64 > cw.lower && !members.is_empty() {
            match treewidth_at_most(&h, t as i64 - 1, opts.budget) {
                Ok(Decision::No) => cw.lower = t as i64,
                Ok(Decision::Yes(td)) => cw.upper = Some(td.width()),
                Ok(Decision::Unknown) | Err(Error::GuardExceeded { .. }) => {
                    partial.push(format!("class {colour}: width {} undecided", t as i64 - 1))
                }
                Err(e) => return Err(e),
            }
        }
        classes.push(cw);
    }

    let mut outcome = None;
    let mut outcome_check = None;
    let mut slab_bound = None;
    if let Some(b) = opts.build_level {
        let params = BuildParams {
            t,
            b,
            colour: 1,
            override_schedule: opts.override_schedule,
            exec: opts.exec,
        };
        let o = find_blocked_or_bramble(&host, part, &params)?;
        let check = verify_outcome(&host, part, &o, t)?;
        if let (BuildOutcome::Blocked { staircase, b, colour }, true) = (&o, check.valid) {
            let e = enlarge(&host, staircase, *b)?;
            let g = e.graph();
            let candidates: Vec<usize> = e.interior().into_iter().filter(|&v| part.of(g.coord(v)) == *colour).collect();
            let x = minimalize(g, e.left(), e.right(), &candidates)?;
            let slab = Slab::from_enlargement(&e);
            let report = audit_separator(&slab, &x, &AuditOptions::default())?;
            if report.pass {
                slab_bound = Some(report.bound.max(report.tw.lower));
                let cls = &mut classes[(*colour - 1) as usize];
                cls.lower = cls.lower.max(report.tw.lower);
            } else {
                partial.push("slab audit of the blocked staircase did not pass".into());
            }
        }
        if let (Some(c), true) = (check.colour, check.valid) {
            let cls = &mut classes[(c - 1) as usize];
            cls.lower = cls.lower.max(check.tw_lower);
        }
        outcome = Some(o);
        outcome_check = Some(check);
    }
    let witness = classes.iter().find(|c| c.lower >= t as i64).map(|c| c.colour);
    Ok(PartitionReport {
        n: part.n,
        t,
        classes,
        outcome,
        outcome_check,
        slab_bound,
        witness,
        partial,
    })
}
