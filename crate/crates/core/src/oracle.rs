//! Exact decision procedures for finite colouring problems, and the table
//! search that reconstructs hierarchical colour tables.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::colourers::{
    ab_face_2colour_with, bipartite_2colour, target_graph, verify_colouring, ColourError,
    Provenance, Target,
};
use crate::planargraph::{build_graph, GraphError, SimpleGraph, TilingGraph};
use crate::schemes::{
    apply_table, element_slots, layout, standard_scheme, ColourTable, SchemeSpec, Slot, TableKey,
};
use crate::substitution::{default_patch, generate_patch, seed_tile, Patch, SubstError, Tiling};
use crate::{map_slice, Exec};

pub const DEFAULT_LIMIT: usize = 20_000;
/// Search nodes allowed per k-decision before the oracle gives up.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("problem has {elements} elements, above the limit {limit}; refusing")]
    LimitExceeded { elements: usize, limit: usize },
    #[error("search budget of {nodes} nodes exhausted deciding k = {k}; refusing")]
    BudgetExhausted { k: u32, nodes: u64 },
    #[error("no colour table exists for scheme {scheme}: {reason}")]
    NoTable { scheme: String, reason: String },
    #[error("derived table fails on the verification patch: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Colour(#[from] ColourError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Subst(#[from] SubstError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourProblem {
    pub graph: SimpleGraph,
    pub mode: Target,
}

impl ColourProblem {
    /// Vertex graph, line graph or dual graph of a tiling graph.
    pub fn from_tiling(g: &TilingGraph, mode: Target) -> ColourProblem {
        ColourProblem {
            graph: target_graph(g, mode),
            mode,
        }
    }

    /// SHA-256 of the canonical edge list.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{};", self.graph.len()));
        for (a, b) in self.graph.edges() {
            h.update(format!("{a}-{b},"));
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChromaticResult {
    pub chi: u32,
    pub witness: Vec<u32>,
    /// Odd cycle proving `chi >= 3`, when there is one.
    pub odd_cycle: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Bipartition {
    Colouring(Vec<u32>),
    OddCycle(Vec<u32>),
}

pub fn bipartite_or_witness(problem: &ColourProblem) -> Bipartition {
    match bipartite_2colour(&problem.graph) {
        Ok(c) => Bipartition::Colouring(c),
        Err(ColourError::OddCycle { cycle }) => Bipartition::OddCycle(cycle),
        Err(e) => unreachable!("bipartite check only reports odd cycles: {e}"),
    }
}

pub fn exact_chromatic(
    problem: &ColourProblem,
    limit: usize,
) -> Result<ChromaticResult, OracleError> {
    exact_chromatic_budget(problem, limit, DEFAULT_NODE_BUDGET)
}

pub fn exact_chromatic_budget(
    problem: &ColourProblem,
    limit: usize,
    budget: u64,
) -> Result<ChromaticResult, OracleError> {
    let g = &problem.graph;
    if g.len() > limit {
        return Err(OracleError::LimitExceeded {
            elements: g.len(),
            limit,
        });
    }
    if g.is_empty() {
        return Ok(ChromaticResult {
            chi: 0,
            witness: Vec::new(),
            odd_cycle: None,
        });
    }
    if g.edge_count() == 0 {
        return Ok(ChromaticResult {
            chi: 1,
            witness: vec![0; g.len()],
            odd_cycle: None,
        });
    }
    let odd_cycle = match bipartite_or_witness(problem) {
        Bipartition::Colouring(c) => {
            return Ok(ChromaticResult {
                chi: 2,
                witness: c,
                odd_cycle: None,
            })
        }
        Bipartition::OddCycle(c) => c,
    };
    let mut k = 3.max(greedy_clique(g).len() as u32);
    loop {
        if let Some(w) = decide(g, k, budget)? {
            return Ok(ChromaticResult {
                chi: k,
                witness: w,
                odd_cycle: Some(odd_cycle),
            });
        }
        k += 1;
    }
}

/// A clique found greedily from each vertex; a lower bound for chi.
pub fn greedy_clique(g: &SimpleGraph) -> Vec<u32> {
    let mut best: Vec<u32> = Vec::new();
    for v in 0..g.len() as u32 {
        if g.adj[v as usize].len() < best.len() {
            continue;
        }
        let mut clique = vec![v];
        let mut cand: Vec<u32> = g.adj[v as usize].clone();
        cand.sort_by_key(|&w| std::cmp::Reverse(g.adj[w as usize].len()));
        for w in cand {
            if clique.iter().all(|&c| g.has_edge(c, w)) {
                clique.push(w);
            }
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}

/// Is `g` k-colourable? DSATUR order with colour-symmetry breaking: a
/// vertex may only open the next unused colour.
pub fn decide(g: &SimpleGraph, k: u32, budget: u64) -> Result<Option<Vec<u32>>, OracleError> {
    let n = g.len();
    let ku = k as usize;
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    if k == 0 {
        return Ok(None);
    }
    const NONE: u32 = u32::MAX;
    let mut colour = vec![NONE; n];
    let mut counts = vec![0u32; n * ku];
    let mut sat = vec![0u32; n];
    let degree: Vec<usize> = g.adj.iter().map(Vec::len).collect();

    struct Frame {
        v: usize,
        next: u32,
        prev_max: i64,
    }
    let mut stack: Vec<Frame> = Vec::with_capacity(n);
    let mut max_used: i64 = -1;
    let mut nodes: u64 = 0;

    let assign = |v: usize, c: u32, colour: &mut [u32], counts: &mut [u32], sat: &mut [u32]| {
        colour[v] = c;
        for &w in &g.adj[v] {
            let slot = &mut counts[w as usize * ku + c as usize];
            if *slot == 0 {
                sat[w as usize] += 1;
            }
            *slot += 1;
        }
    };
    let unassign = |v: usize, colour: &mut [u32], counts: &mut [u32], sat: &mut [u32]| {
        let c = colour[v];
        colour[v] = NONE;
        for &w in &g.adj[v] {
            let slot = &mut counts[w as usize * ku + c as usize];
            *slot -= 1;
            if *slot == 0 {
                sat[w as usize] -= 1;
            }
        }
    };

    loop {
        if stack.len() == n {
            return Ok(Some(colour));
        }
        // Most saturated, then highest degree, then smallest id.
        let mut v = usize::MAX;
        for u in 0..n {
            if colour[u] != NONE {
                continue;
            }
            if v == usize::MAX || (sat[u], degree[u]) > (sat[v], degree[v]) {
                v = u;
            }
        }
        stack.push(Frame {
            v,
            next: 0,
            prev_max: max_used,
        });
        loop {
            let Some(fr) = stack.last_mut() else {
                return Ok(None);
            };
            let v = fr.v;
            if colour[v] != NONE {
                unassign(v, &mut colour, &mut counts, &mut sat);
            }
            let top = ((fr.prev_max + 1) as u32).min(k - 1);
            let found = (fr.next..=top).find(|&c| counts[v * ku + c as usize] == 0);
            if let Some(c) = found {
                fr.next = c + 1;
                max_used = fr.prev_max.max(c as i64);
                assign(v, c, &mut colour, &mut counts, &mut sat);
                nodes += 1;
                if nodes > budget {
                    return Err(OracleError::BudgetExhausted { k, nodes: budget });
                }
                break;
            }
            stack.pop();
        }
    }
}

/// Chromatic number by enumerating every proper partition of the vertices
/// into colour classes; for cross-checking on tiny graphs.
pub fn brute_force_chromatic(g: &SimpleGraph) -> u32 {
    fn go(v: usize, g: &SimpleGraph, col: &mut Vec<u32>, used: u32, best: &mut u32) {
        if v == g.len() {
            *best = (*best).min(used);
            return;
        }
        // Class labels in order of first use, so each partition appears once.
        for c in 0..=used {
            if g.adj[v]
                .iter()
                .any(|&u| (u as usize) < v && col[u as usize] == c)
            {
                continue;
            }
            col[v] = c;
            go(v + 1, g, col, used.max(c + 1), best);
        }
    }
    let mut best = g.len() as u32;
    go(0, g, &mut vec![0; g.len()], 0, &mut best);
    best
}

/// A machine-readable oracle result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub v: String,
    pub digest: String,
    pub mode: Target,
    pub chi: u32,
    pub witness: Option<Vec<u32>>,
    pub odd_cycle: Option<Vec<u32>>,
}

pub fn certificate(problem: &ColourProblem, r: &ChromaticResult) -> Certificate {
    Certificate {
        v: "v1".into(),
        digest: problem.digest(),
        mode: problem.mode,
        chi: r.chi,
        witness: Some(r.witness.clone()),
        odd_cycle: r.odd_cycle.clone(),
    }
}

/// Runs several problems, in parallel when enabled.
pub fn exact_chromatic_batch(
    problems: &[ColourProblem],
    limit: usize,
    exec: Exec,
) -> Vec<Result<ChromaticResult, OracleError>> {
    map_slice(exec, problems, |p| exact_chromatic(p, limit))
}

/// Which choices for AB triangle code 13 make the orientation rule proper
/// on the level-4 patch: `(red proper, blue proper)`.
pub fn resolve_ab_code13() -> Result<(bool, bool), OracleError> {
    let patch = default_patch(Tiling::Ab, 4)?;
    let g = build_graph(&patch)?;
    let mut out = [false; 2];
    for (i, red) in [true, false].into_iter().enumerate() {
        let c = ab_face_2colour_with(&patch, red)?;
        out[i] = verify_colouring(&g, &c)?.is_proper();
    }
    Ok((out[0], out[1]))
}

/// Colour of AB triangle code 13 forced by properness (cached).
pub fn ab_code13_red() -> Result<bool, ColourError> {
    static R: OnceLock<Result<bool, String>> = OnceLock::new();
    R.get_or_init(|| match resolve_ab_code13() {
        Ok((true, _)) => Ok(true),
        Ok((false, true)) => Ok(false),
        Ok((false, false)) => Err("neither choice for code 13 is proper".into()),
        Err(e) => Err(e.to_string()),
    })
    .clone()
    .map_err(ColourError::MissingKey)
}

/// Colour-constraint problem: each variable has a set of forbidden
/// colours and must differ from its neighbours. A twisted edge `(j, true)`
/// at `i` requires `c_i != swap_colour(c_j)` instead.
#[derive(Clone, Debug, Default)]
pub struct Csp {
    pub forbidden: Vec<u64>,
    pub adj: Vec<Vec<(usize, bool)>>,
}

impl Csp {
    pub fn new(n: usize) -> Csp {
        Csp {
            forbidden: vec![0; n],
            adj: vec![Vec::new(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.forbidden.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forbidden.is_empty()
    }

    pub fn add_edge(&mut self, i: usize, j: usize, twisted: bool) {
        self.adj[i].push((j, twisted));
        self.adj[j].push((i, twisted));
    }

    fn finish(&mut self) {
        for l in &mut self.adj {
            l.sort_unstable();
            l.dedup();
        }
    }

    /// Connected components, each listed in increasing order.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.len()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in 0..self.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut head = 0;
            while head < members.len() {
                let v = members[head];
                head += 1;
                for &(w, _) in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    fn restrict(&self, vars: &[usize]) -> Csp {
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in vars.iter().enumerate() {
            pos[v] = i;
        }
        let mut sub = Csp::new(vars.len());
        for (i, &v) in vars.iter().enumerate() {
            sub.forbidden[i] = self.forbidden[v];
            sub.adj[i] = self.adj[v].iter().map(|&(w, t)| (pos[w], t)).collect();
        }
        sub
    }
}

/// Outcome of a budgeted search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search {
    Found(Vec<u32>),
    Infeasible,
    Exhausted,
}

/// Lexicographically smallest solution (variables in index order, colours
/// ascending). Independent components are solved separately, which leaves
/// the lexicographic optimum unchanged.
pub fn solve_csp(p: &Csp, palette: u32, budget: u64) -> Search {
    let mut out = vec![0u32; p.len()];
    let mut left = budget;
    for vars in p.components() {
        let sub = p.restrict(&vars);
        match solve_connected(&sub, palette, left) {
            (Search::Found(cols), used) => {
                left -= used;
                for (i, &v) in vars.iter().enumerate() {
                    out[v] = cols[i];
                }
            }
            (other, _) => return other,
        }
    }
    Search::Found(out)
}

fn solve_connected(p: &Csp, palette: u32, budget: u64) -> (Search, u64) {
    let n = p.len();
    let full: u64 = (1u64 << palette) - 1;
    let mut domain: Vec<u64> = p.forbidden.iter().map(|f| full & !f).collect();
    if domain.contains(&0) {
        return (Search::Infeasible, 0);
    }
    let mut colour = vec![u32::MAX; n];
    // Trail of (variable, previous domain) for undoing forward checks.
    let mut trail: Vec<(usize, u64)> = Vec::new();
    let mut marks: Vec<usize> = Vec::with_capacity(n);
    let mut next = vec![0u32; n];
    let mut i = 0usize;
    let mut nodes = 0u64;
    let undo = |marks: &mut Vec<usize>, trail: &mut Vec<(usize, u64)>, domain: &mut [u64]| {
        let m = marks.pop().expect("mark per placed variable");
        while trail.len() > m {
            let (j, d) = trail.pop().expect("non-empty trail");
            domain[j] = d;
        }
    };
    loop {
        if i == n {
            return (Search::Found(colour), nodes);
        }
        let mut placed = false;
        while next[i] < palette {
            let c = next[i];
            next[i] += 1;
            if domain[i] & (1 << c) == 0 {
                continue;
            }
            nodes += 1;
            if nodes > budget {
                return (Search::Exhausted, nodes);
            }
            marks.push(trail.len());
            let mut ok = true;
            for &(j, twisted) in &p.adj[i] {
                let bad = if twisted {
                    crate::schemes::swap_colour(c)
                } else {
                    c
                };
                if j == i {
                    // A twisted self-loop only rules out fixed points.
                    if bad == c {
                        ok = false;
                        break;
                    }
                    continue;
                }
                if j > i && domain[j] & (1 << bad) != 0 {
                    trail.push((j, domain[j]));
                    domain[j] &= !(1 << bad);
                    if domain[j] == 0 {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                colour[i] = c;
                placed = true;
                break;
            }
            undo(&mut marks, &mut trail, &mut domain);
        }
        if placed {
            i += 1;
            if i < n {
                next[i] = 0;
            }
            continue;
        }
        if i == 0 {
            return (Search::Infeasible, nodes);
        }
        i -= 1;
        colour[i] = u32::MAX;
        undo(&mut marks, &mut trail, &mut domain);
    }
}

/// A scheme's training problem: distinct keys and their constraints.
#[derive(Clone, Debug)]
pub struct TableProblem {
    pub keys: Vec<TableKey>,
    pub csp: Csp,
}

/// Constraints a table must satisfy on one patch. Free elements are left
/// to boundary completion and impose nothing.
pub fn table_problem(
    spec: &SchemeSpec,
    patch: &Patch,
    g: &TilingGraph,
) -> Result<TableProblem, OracleError> {
    let lay = layout(spec, patch, g)?;
    let slots = element_slots(spec, patch, g, &lay)?;
    let mut index: BTreeMap<TableKey, usize> = BTreeMap::new();
    for s in &slots {
        if let Slot::Key(k, _) = s {
            index.entry(k.clone()).or_insert(0);
        }
    }
    for (i, v) in index.values_mut().enumerate() {
        *v = i;
    }
    let keys: Vec<TableKey> = index.keys().cloned().collect();
    let mut csp = Csp::new(keys.len());
    let tg = target_graph(g, spec.target);
    for (a, b) in tg.edges() {
        match (&slots[a as usize], &slots[b as usize]) {
            (Slot::Key(x, sx), Slot::Key(y, sy)) => {
                let (i, j) = (index[x], index[y]);
                if i == j && sx == sy {
                    return Err(OracleError::NoTable {
                        scheme: spec.name.clone(),
                        reason: format!("adjacent elements share key {x}"),
                    });
                }
                csp.add_edge(i, j, sx != sy);
            }
            (Slot::Key(x, sx), Slot::Fixed(c)) | (Slot::Fixed(c), Slot::Key(x, sx)) => {
                let c = if *sx {
                    crate::schemes::swap_colour(*c)
                } else {
                    *c
                };
                csp.forbidden[index[x]] |= 1 << c;
            }
            (Slot::Fixed(c), Slot::Fixed(d)) if c == d => {
                return Err(OracleError::NoTable {
                    scheme: spec.name.clone(),
                    reason: format!("adjacent border vertices {a} and {b} share a label"),
                });
            }
            _ => {}
        }
    }
    csp.finish();
    Ok(TableProblem { keys, csp })
}

/// Search budget for boundary completion, per attempt.
pub const COMPLETION_NODE_BUDGET: u64 = 5_000_000;
/// How many rings of precoloured elements completion may release.
pub const COMPLETION_MAX_RINGS: usize = 8;

/// Fills the `None` entries of `partial` so the result is proper on `g`.
///
/// The free elements are searched exactly, in breadth-first order. If no
/// completion exists, the precoloured ring around the free set is released
/// and the search repeated.
pub fn complete_partial(
    g: &SimpleGraph,
    partial: &[Option<u32>],
    palette: u32,
) -> Result<Completion, OracleError> {
    let mut free: Vec<bool> = partial.iter().map(Option::is_none).collect();
    for ring in 0..=COMPLETION_MAX_RINGS {
        let order = bfs_order(g, &free);
        let mut pos = vec![usize::MAX; g.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i;
        }
        let mut csp = Csp::new(order.len());
        for (i, &v) in order.iter().enumerate() {
            for &w in &g.adj[v as usize] {
                if free[w as usize] {
                    if pos[w as usize] > i {
                        csp.add_edge(i, pos[w as usize], false);
                    }
                } else if let Some(c) = partial[w as usize] {
                    csp.forbidden[i] |= 1 << c;
                }
            }
        }
        csp.finish();
        match solve_csp(&csp, palette, COMPLETION_NODE_BUDGET) {
            Search::Found(cols) => {
                let mut out: Vec<u32> = partial.iter().map(|c| c.unwrap_or(0)).collect();
                for (i, &v) in order.iter().enumerate() {
                    out[v as usize] = cols[i];
                }
                return Ok(Completion {
                    colours: out,
                    free: order.len(),
                    rings: ring,
                });
            }
            Search::Infeasible | Search::Exhausted if ring < COMPLETION_MAX_RINGS => {
                let grow: Vec<u32> = (0..g.len() as u32)
                    .filter(|&v| {
                        !free[v as usize] && g.adj[v as usize].iter().any(|&w| free[w as usize])
                    })
                    .collect();
                if grow.is_empty() {
                    break;
                }
                for v in grow {
                    free[v as usize] = true;
                }
            }
            Search::Exhausted => {
                return Err(OracleError::BudgetExhausted {
                    k: palette,
                    nodes: COMPLETION_NODE_BUDGET,
                })
            }
            Search::Infeasible => break,
        }
    }
    Err(OracleError::NoTable {
        scheme: "completion".into(),
        reason: format!("no {palette}-colouring extends the precoloured elements"),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Completion {
    pub colours: Vec<u32>,
    /// Elements searched in the final attempt.
    pub free: usize,
    /// Precoloured rings released before a completion was found.
    pub rings: usize,
}

/// Free elements in breadth-first order, each component from its minimum.
fn bfs_order(g: &SimpleGraph, free: &[bool]) -> Vec<u32> {
    let mut seen = vec![false; g.len()];
    let mut order = Vec::new();
    for s in 0..g.len() {
        if !free[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let start = order.len();
        order.push(s as u32);
        let mut head = start;
        while head < order.len() {
            let v = order[head] as usize;
            head += 1;
            for &w in &g.adj[v] {
                if free[w as usize] && !seen[w as usize] {
                    seen[w as usize] = true;
                    order.push(w);
                }
            }
        }
    }
    order
}

/// Search budget for the table search.
pub const TABLE_NODE_BUDGET: u64 = 50_000_000;

/// Finds the lexicographically smallest table proper on the training
/// patch, then checks it on the verification patch.
pub fn derive_colour_table(
    spec: &SchemeSpec,
    train: &Patch,
    verify: &Patch,
) -> Result<ColourTable, OracleError> {
    let g = build_graph(train)?;
    let p = table_problem(spec, train, &g)?;
    let colours = match solve_csp(&p.csp, spec.palette, TABLE_NODE_BUDGET) {
        Search::Found(c) => c,
        Search::Infeasible => {
            return Err(OracleError::NoTable {
                scheme: spec.name.clone(),
                reason: format!("no proper assignment of {} keys exists", p.keys.len()),
            })
        }
        Search::Exhausted => {
            return Err(OracleError::BudgetExhausted {
                k: spec.palette,
                nodes: TABLE_NODE_BUDGET,
            })
        }
    };
    let table = ColourTable {
        spec: spec.clone(),
        provenance: Provenance::Derived,
        entries: p.keys.into_iter().zip(colours).collect(),
    };
    let gv = build_graph(verify)?;
    let c = apply_table(&table, verify, &gv)
        .map_err(|e| OracleError::VerificationFailed(e.to_string()))?;
    let report = verify_colouring(&gv, &c)?;
    if !report.is_proper() {
        return Err(OracleError::VerificationFailed(format!(
            "{} conflicts, first {:?}",
            report.conflicts.len(),
            report.conflicts.first()
        )));
    }
    Ok(table)
}

/// Derives a scheme's table from default patches at its training and
/// verification levels.
pub fn derive_standard_table(spec: &SchemeSpec) -> Result<ColourTable, OracleError> {
    let kind = spec.tiling.default_seed_kind();
    let train = generate_patch(
        spec.tiling,
        spec.train_level,
        &seed_tile(kind, spec.train_level, 0)?,
    )?;
    let verify = generate_patch(
        spec.tiling,
        spec.verify_level,
        &seed_tile(kind, spec.verify_level, 0)?,
    )?;
    derive_colour_table(spec, &train, &verify)
}

/// The derived table of a standard scheme, computed once per process.
pub fn standard_table(tiling: Tiling, target: Target) -> Result<ColourTable, OracleError> {
    type Cache = Mutex<BTreeMap<(Tiling, Target), Result<ColourTable, OracleError>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let spec = standard_scheme(tiling, target).ok_or_else(|| OracleError::NoTable {
        scheme: format!("{tiling}-{target:?}"),
        reason: "no hierarchical scheme for this tiling and target".into(),
    })?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(r) = cache.lock().expect("table cache").get(&(tiling, target)) {
        return r.clone();
    }
    let r = derive_standard_table(&spec);
    cache
        .lock()
        .expect("table cache")
        .insert((tiling, target), r.clone());
    r
}

/// Chromatic number, chromatic index or face chromatic number claimed for a
/// whole tiling.
pub fn claimed_value(tiling: Tiling, target: Target) -> u32 {
    match (tiling, target) {
        (Tiling::Chair, Target::Vertex) => 2,
        (Tiling::Chair, Target::Edge) => 4,
        (Tiling::Chair, Target::Face) => 3,
        (Tiling::Ab, Target::Face) => 2,
        (_, Target::Vertex) => 3,
        (_, Target::Edge) => 8,
        (_, Target::Face) => 3,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeVerdict {
    pub mode: Target,
    pub claimed: u32,
    /// Lower bound proved on the patch.
    pub lower: u32,
    /// Palette of the constructive colouring.
    pub upper: u32,
    pub proper: bool,
    pub lower_witness: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub v: String,
    pub tiling: Tiling,
    pub level: u32,
    pub margin: u32,
    pub modes: Vec<ModeVerdict>,
    pub pass: bool,
}

/// Lower bound for the colouring problem of `target` on `g`, with a short
/// description of the witness.
pub fn lower_bound(g: &TilingGraph, target: Target, margin: u32) -> (u32, String) {
    if target == Target::Edge {
        let d = crate::planargraph::degree_stats(g, margin as usize).max_interior_degree as u32;
        return (
            d,
            format!("vertex of degree {d} at distance > {margin} from the boundary"),
        );
    }
    let problem = ColourProblem::from_tiling(g, target);
    match bipartite_or_witness(&problem) {
        Bipartition::OddCycle(c) => (3, format!("odd cycle of length {}", c.len())),
        Bipartition::Colouring(_) if problem.graph.edge_count() > 0 => (2, "an edge".into()),
        Bipartition::Colouring(_) => (
            u32::from(!problem.graph.is_empty()),
            "no adjacencies".into(),
        ),
    }
}

/// Checks the claimed values for one tiling on its level-L patch: each
/// constructive colouring must be proper within the claimed palette and
/// the patch must force at least the claimed number of colours.
pub fn certify(tiling: Tiling, level: u32, margin: u32) -> Result<Verdict, OracleError> {
    let patch = default_patch(tiling, level)?;
    let g = build_graph(&patch)?;
    let mut modes = Vec::new();
    for target in [Target::Vertex, Target::Edge, Target::Face] {
        let claimed = claimed_value(tiling, target);
        let c = crate::colourers::standard_colouring(&patch, &g, target)?;
        let proper = verify_colouring(&g, &c)?.is_proper();
        let upper = c.palette;
        let (lower, lower_witness) = lower_bound(&g, target, margin);
        modes.push(ModeVerdict {
            mode: target,
            claimed,
            lower,
            upper,
            proper,
            lower_witness,
            pass: proper && lower == claimed && upper == claimed,
        });
    }
    let pass = modes.iter().all(|m| m.pass);
    Ok(Verdict {
        v: "v1".into(),
        tiling,
        level,
        margin,
        modes,
        pass,
    })
}
