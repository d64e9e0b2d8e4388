use std::collections::{BTreeSet, HashMap};

use super::{Class, ClassId, Lamination, LaminationError, LinkIndex, StoredClass};
use crate::circle::RatAngle;
use crate::par::Exec;

const FORWARD_CAP: usize = 1 << 20;
const OPTION_CAP: usize = 8;
const WORK_CAP: usize = 1 << 22;

struct Builder {
    degree: u32,
    classes: Vec<StoredClass>,
    by_angle: HashMap<RatAngle, ClassId>,
}

impl Builder {
    fn push(&mut self, class: Class, depth: u32) -> ClassId {
        let id = self.classes.len();
        for &a in class.angles() {
            self.by_angle.insert(a, id);
        }
        self.classes.push(StoredClass { class, depth });
        id
    }

    fn class(&self, id: ClassId) -> &Class {
        &self.classes[id].class
    }

    fn index(&self) -> LinkIndex {
        LinkIndex::from_classes(self.classes.iter().map(|c| &c.class).enumerate())
    }
}

fn forward(d: u32, generators: &[Class]) -> Result<Builder, LaminationError> {
    if d < 2 {
        return Err(LaminationError::BadDegree(d));
    }
    for (i, g) in generators.iter().enumerate() {
        for h in &generators[..i] {
            if !g.is_disjoint(h) {
                return Err(LaminationError::Overlapping(h.clone(), g.clone()));
            }
            if !g.unlinked_with(h) {
                return Err(LaminationError::Linked(h.clone(), g.clone()));
            }
        }
    }
    let mut b = Builder {
        degree: d,
        classes: Vec::new(),
        by_angle: HashMap::new(),
    };
    let mut index = LinkIndex::new();
    for g in generators {
        let id = b.push(g.clone(), 0);
        index.insert_class(id, g);
    }
    let mut next = 0;
    while next < b.classes.len() {
        let class = b.class(next).clone();
        next += 1;
        let image = class.image(d);
        let owners: BTreeSet<ClassId> = image
            .angles()
            .iter()
            .filter_map(|a| b.by_angle.get(a).copied())
            .collect();
        if let Some(&o) = owners.iter().next() {
            if owners.len() == 1 && *b.class(o) == image {
                continue;
            }
            return Err(LaminationError::InconsistentImage {
                class,
                image,
                stored: b.class(o).clone(),
            });
        }
        if let Some(o) = index.linked_owner(&image, None) {
            return Err(LaminationError::Linked(b.class(o).clone(), image));
        }
        if b.classes.len() >= FORWARD_CAP {
            return Err(LaminationError::BoundExceeded(format!(
                "forward closure exceeds {FORWARD_CAP} classes"
            )));
        }
        let id = b.push(image.clone(), 0);
        index.insert_class(id, &image);
    }
    Ok(b)
}

/// The forward closure of `generators` under `σ_d` (no pullback generations).
pub fn forward_closure(d: u32, generators: &[Class]) -> Result<Lamination, LaminationError> {
    pullback_closure(d, generators, 0)
}

/// Forward images of `generators` plus `depth` generations of preimage classes.
pub fn pullback_closure(
    d: u32,
    generators: &[Class],
    depth: u32,
) -> Result<Lamination, LaminationError> {
    pullback_closure_with(d, generators, depth, Exec::default())
}

struct Plan {
    options: Vec<Vec<Class>>,
    truncated: bool,
    remaining: Vec<RatAngle>,
}

pub fn pullback_closure_with(
    d: u32,
    generators: &[Class],
    depth: u32,
    exec: Exec,
) -> Result<Lamination, LaminationError> {
    let mut b = forward(d, generators)?;
    let mut frontier: Vec<ClassId> = (0..b.classes.len()).collect();
    for gen in 1..=depth {
        let snapshot = b.index();
        let plans = {
            let b = &b;
            let snapshot = &snapshot;
            exec.map(&frontier, |&pid| {
                plan(b, pid, &|s: &Class| snapshot.linked_owner(s, None).is_none(), OPTION_CAP)
            })
        };
        let mut gen_index = LinkIndex::new();
        let mut next = Vec::new();
        for (&pid, plan) in frontier.iter().zip(plans) {
            let mut plan = plan?;
            if plan.truncated {
                let clear = |s: &Class| {
                    snapshot.linked_owner(s, None).is_none() && gen_index.linked_owner(s, None).is_none()
                };
                let (options, truncated) = enumerate(d, b.class(pid), &plan.remaining, &clear, 2)?;
                plan.options = options;
                plan.truncated = truncated;
            } else {
                plan.options
                    .retain(|parts| parts.iter().all(|p| gen_index.linked_owner(p, None).is_none()));
            }
            match plan.options.len() {
                0 => {
                    return Err(LaminationError::NoConsistentPullback {
                        class: b.class(pid).clone(),
                        depth: gen,
                    })
                }
                1 => {
                    for part in plan.options.pop().expect("one option") {
                        let id = b.push(part.clone(), gen);
                        gen_index.insert_class(id, &part);
                        next.push(id);
                    }
                }
                n => {
                    return Err(LaminationError::AmbiguousPullback {
                        class: b.class(pid).clone(),
                        depth: gen,
                        options: n,
                    })
                }
            }
        }
        frontier = next;
    }
    let n_gen = generators.len();
    Lamination::from_parts(d, depth, b.classes, (0..n_gen).collect())
}

fn plan(
    b: &Builder,
    pid: ClassId,
    clear: &(dyn Fn(&Class) -> bool + Sync),
    cap: usize,
) -> Result<Plan, LaminationError> {
    let d = b.degree;
    let g = b.class(pid);
    let mut pre = Vec::with_capacity(g.len() * d as usize);
    for a in g.angles() {
        pre.extend(a.preimages(d)?);
    }
    pre.sort_unstable();
    let owners: BTreeSet<ClassId> = pre.iter().filter_map(|a| b.by_angle.get(a).copied()).collect();
    for &o in &owners {
        let stored = b.class(o);
        let inside = stored.angles().iter().all(|a| pre.binary_search(a).is_ok());
        if !inside || stored.image(d) != *g {
            return Err(LaminationError::InconsistentPreimage {
                class: g.clone(),
                stored: stored.clone(),
            });
        }
    }
    let remaining: Vec<RatAngle> = pre
        .into_iter()
        .filter(|a| !b.by_angle.contains_key(a))
        .collect();
    let (options, truncated) = enumerate(d, g, &remaining, clear, cap)?;
    Ok(Plan {
        options,
        truncated,
        remaining,
    })
}

/// All partitions of `r` into classes mapping onto `g` with the hole condition,
/// pairwise unlinked and passing `clear`, up to `cap` of them.
fn enumerate(
    d: u32,
    g: &Class,
    r: &[RatAngle],
    clear: &(dyn Fn(&Class) -> bool + Sync),
    cap: usize,
) -> Result<(Vec<Vec<Class>>, bool), LaminationError> {
    let fib: Vec<usize> = r
        .iter()
        .map(|a| {
            g.angles()
                .binary_search(&a.sigma(d))
                .expect("preimage maps into parent")
        })
        .collect();
    let mut fibers = vec![Vec::new(); g.len()];
    for (i, &y) in fib.iter().enumerate() {
        fibers[y].push(i);
    }
    let mut s = Search {
        d,
        r,
        fib,
        fibers,
        used: vec![false; r.len()],
        parts: Vec::new(),
        out: Vec::new(),
        cap,
        truncated: false,
        work: 0,
        clear,
    };
    s.run()?;
    Ok((s.out, s.truncated))
}

struct Search<'a> {
    d: u32,
    r: &'a [RatAngle],
    fib: Vec<usize>,
    fibers: Vec<Vec<usize>>,
    used: Vec<bool>,
    parts: Vec<Class>,
    out: Vec<Vec<Class>>,
    cap: usize,
    truncated: bool,
    work: usize,
    clear: &'a (dyn Fn(&Class) -> bool + Sync),
}

impl Search<'_> {
    fn run(&mut self) -> Result<(), LaminationError> {
        if self.truncated {
            return Ok(());
        }
        let Some(r0) = (0..self.r.len()).find(|&i| !self.used[i]) else {
            if self.out.len() >= self.cap {
                self.truncated = true;
            } else {
                self.out.push(self.parts.clone());
            }
            return Ok(());
        };
        let y0 = self.fib[r0];
        let avail: Vec<Vec<usize>> = self
            .fibers
            .iter()
            .map(|f| f.iter().copied().filter(|&i| !self.used[i]).collect())
            .collect();
        for k in 1..=self.d as usize {
            if avail.iter().any(|a| a.len() < k) {
                break;
            }
            let choices: Vec<Vec<Vec<usize>>> = avail
                .iter()
                .enumerate()
                .map(|(y, a)| {
                    let mut cs = combinations(a, k);
                    if y == y0 {
                        cs.retain(|c| c.contains(&r0));
                    }
                    cs
                })
                .collect();
            let mut odo = vec![0usize; choices.len()];
            'product: loop {
                self.work += 1;
                if self.work > WORK_CAP {
                    return Err(LaminationError::BoundExceeded(format!(
                        "sibling partition search exceeded {WORK_CAP} steps"
                    )));
                }
                let members: Vec<usize> = odo
                    .iter()
                    .enumerate()
                    .flat_map(|(y, &j)| choices[y][j].iter().copied())
                    .collect();
                let part = Class::new(members.iter().map(|&i| self.r[i]))?;
                if part.covers_image_in_order(self.d)
                    && self.parts.iter().all(|p| part.unlinked_with(p))
                    && (self.clear)(&part)
                {
                    for &i in &members {
                        self.used[i] = true;
                    }
                    self.parts.push(part);
                    self.run()?;
                    self.parts.pop();
                    for &i in &members {
                        self.used[i] = false;
                    }
                    if self.truncated {
                        return Ok(());
                    }
                }
                for y in 0..odo.len() {
                    odo[y] += 1;
                    if odo[y] < choices[y].len() {
                        continue 'product;
                    }
                    odo[y] = 0;
                }
                break;
            }
        }
        Ok(())
    }
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    go(items, k, 0, &mut cur, &mut out);
    out
}
