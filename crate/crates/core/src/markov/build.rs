use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::Rng;

use super::map::PIECE_CAP;
use super::{exact_periods, fixed_points, MarkovError, MarkovTreeMap, Piece, Rat, MAX_PERIOD_BOUND};
use crate::dendrite::Tree;
use crate::par::Exec;

fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Edge and parameter of coordinate `y` on the path with vertex coordinates `xs`.
fn locate(xs: &[Rat], y: &Rat) -> (usize, Rat) {
    let e = xs.partition_point(|c| c <= y).clamp(1, xs.len() - 1) - 1;
    (e, (y - &xs[e]) / (&xs[e + 1] - &xs[e]))
}

/// The interval map whose graph joins the given points by straight segments.
/// The points' abscissas become the vertices; segments are split wherever
/// their values cross a vertex coordinate.
pub fn interval_from_graph(graph: &[(Rat, Rat)]) -> Result<MarkovTreeMap, MarkovError> {
    if graph.len() < 2 {
        return Err(MarkovError::Invalid("a graph needs at least two points".into()));
    }
    let xs: Vec<Rat> = graph.iter().map(|(x, _)| x.clone()).collect();
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(MarkovError::NotAnInterval("abscissas must increase".into()));
    }
    let (lo, hi) = (&xs[0], &xs[xs.len() - 1]);
    if let Some((x, y)) = graph.iter().find(|(_, y)| y < lo || y > hi) {
        return Err(MarkovError::Invalid(format!("f({x}) = {y} leaves the interval")));
    }
    let mut pieces = Vec::new();
    for (e, w) in graph.windows(2).enumerate() {
        let ((_, ya), (_, yb)) = (&w[0], &w[1]);
        if ya == yb {
            let (ie, t) = locate(&xs, ya);
            pieces.push(Piece {
                edge: e,
                s0: Rat::zero(),
                s1: Rat::one(),
                image_edge: ie,
                t0: t.clone(),
                t1: t,
            });
            continue;
        }
        // values at which the segment is cut, in the order they are reached
        let mut cuts: Vec<Rat> = vec![ya.clone()];
        let (ymin, ymax) = if ya < yb { (ya, yb) } else { (yb, ya) };
        let mut inner: Vec<Rat> = xs.iter().filter(|c| *c > ymin && *c < ymax).cloned().collect();
        if ya > yb {
            inner.reverse();
        }
        cuts.extend(inner);
        cuts.push(yb.clone());
        let param = |y: &Rat| (y - ya) / (yb - ya);
        for c in cuts.windows(2) {
            let (ie, _) = locate(&xs, &if c[0] < c[1] { c[0].clone() } else { c[1].clone() });
            let width = &xs[ie + 1] - &xs[ie];
            pieces.push(Piece {
                edge: e,
                s0: param(&c[0]),
                s1: param(&c[1]),
                image_edge: ie,
                t0: (&c[0] - &xs[ie]) / &width,
                t1: (&c[1] - &xs[ie]) / &width,
            });
        }
    }
    let n = xs.len();
    MarkovTreeMap::new(n, (0..n - 1).map(|i| (i, i + 1)).collect(), Some(xs), pieces)
}

/// The map sending each vertex `v` to `images[v]` and each edge onto the tree
/// path between the images of its endpoints, at constant speed.
pub fn from_vertex_images(
    vertices: usize,
    edges: Vec<(usize, usize)>,
    coordinates: Option<Vec<Rat>>,
    images: &[usize],
) -> Result<MarkovTreeMap, MarkovError> {
    let tree = Tree::new(vertices, &edges)?;
    if images.len() != vertices || images.iter().any(|&w| w >= vertices) {
        return Err(MarkovError::Invalid(format!(
            "need {vertices} vertex images in range"
        )));
    }
    let index: HashMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let oriented = |a: usize, b: usize| -> (usize, bool) {
        match index.get(&(a, b)) {
            Some(&i) => (i, true),
            None => (index[&(b, a)], false),
        }
    };
    let mut pieces = Vec::new();
    for (e, &(u, v)) in edges.iter().enumerate() {
        let path = tree.path(images[u], images[v]);
        let steps = path.len() - 1;
        if steps == 0 {
            let w = images[u];
            let (ie, &(a, _)) = edges
                .iter()
                .enumerate()
                .find(|(_, &(a, b))| a == w || b == w)
                .ok_or_else(|| MarkovError::Invalid("isolated vertex".into()))?;
            let t = if a == w { Rat::zero() } else { Rat::one() };
            pieces.push(Piece {
                edge: e,
                s0: Rat::zero(),
                s1: Rat::one(),
                image_edge: ie,
                t0: t.clone(),
                t1: t,
            });
            continue;
        }
        for i in 0..steps {
            let (ie, forward) = oriented(path[i], path[i + 1]);
            let (t0, t1) = if forward {
                (Rat::zero(), Rat::one())
            } else {
                (Rat::one(), Rat::zero())
            };
            pieces.push(Piece {
                edge: e,
                s0: rat(i as i64, steps as i64),
                s1: rat(i as i64 + 1, steps as i64),
                image_edge: ie,
                t0,
                t1,
            });
        }
    }
    MarkovTreeMap::new(vertices, edges, coordinates, pieces)
}

pub fn identity() -> MarkovTreeMap {
    interval_from_graph(&[(int(0), int(0)), (int(1), int(1))]).expect("valid graph")
}

/// The full tent map `x ↦ 1 − |2x − 1|` on `[0, 1]`.
pub fn tent() -> MarkovTreeMap {
    interval_from_graph(&[(int(0), int(0)), (rat(1, 2), int(1)), (int(1), int(0))])
        .expect("valid graph")
}

/// `min(h, T(x))` for the tent map `T`, for `0 ≤ h ≤ 1`.
pub fn truncated_tent(h: &Rat) -> Result<MarkovTreeMap, MarkovError> {
    if h < &Rat::zero() || h > &Rat::one() {
        return Err(MarkovError::Invalid(format!("truncation height {h} outside [0, 1]")));
    }
    if h.is_one() {
        return Ok(tent());
    }
    if h.is_zero() {
        return interval_from_graph(&[(int(0), int(0)), (int(1), int(0))]);
    }
    let half = rat(1, 2);
    interval_from_graph(&[
        (int(0), int(0)),
        (h / int(2), h.clone()),
        (half, h.clone()),
        (Rat::one() - h / int(2), h.clone()),
        (int(1), int(0)),
    ])
}

/// The linear map on the Štefan cycle of odd length `k` at the points `1..=k`:
/// the cycle spirals out from the middle point, alternating sides.
pub fn stefan_map(k: usize) -> Result<MarkovTreeMap, MarkovError> {
    if k < 3 || k % 2 == 0 {
        return Err(MarkovError::Invalid(format!("Štefan cycles have odd length >= 3, not {k}")));
    }
    let c = (k + 1) / 2;
    // position of the i-th cycle point, 1-based
    let pos = |i: usize| if i % 2 == 1 { c - (i - 1) / 2 } else { c + i / 2 };
    let mut images = vec![0; k];
    for i in 1..=k {
        let next = if i == k { 1 } else { i + 1 };
        images[pos(i) - 1] = pos(next) - 1;
    }
    from_vertex_images(
        k,
        (0..k - 1).map(|i| (i, i + 1)).collect(),
        Some((1..=k as i64).map(int).collect()),
        &images,
    )
}

/// A random interval map on integer vertices `0..vertices`, linear between
/// them, with consecutive vertex images at most `max_jump` apart.
pub fn random_interval_map<R: Rng + ?Sized>(
    rng: &mut R,
    vertices: usize,
    max_jump: usize,
) -> MarkovTreeMap {
    let n = vertices.max(2);
    let jump = max_jump.max(1) as i64;
    let mut images = vec![rng.gen_range(0..n)];
    for _ in 1..n {
        let prev = *images.last().expect("nonempty") as i64;
        let next = (prev + rng.gen_range(-jump..=jump)).clamp(0, n as i64 - 1);
        images.push(next as usize);
    }
    from_vertex_images(
        n,
        (0..n - 1).map(|i| (i, i + 1)).collect(),
        Some((0..n as i64).map(int).collect()),
        &images,
    )
    .expect("vertex images define a valid map")
}

/// A random map of the star with center 0 and `legs` leaves, determined by
/// random vertex images.
pub fn random_star_map<R: Rng + ?Sized>(rng: &mut R, legs: usize) -> MarkovTreeMap {
    let n = legs.max(1) + 1;
    let images: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    from_vertex_images(n, (1..n).map(|i| (0, i)).collect(), None, &images)
        .expect("vertex images define a valid map")
}

/// Truncation heights between which the truncated tent has period `2^k` but
/// not `2^(k + 1)`, found by bisection with the exact solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TentWindow {
    pub k: u32,
    /// Period `2^k` is realized at this height.
    pub lower: Rat,
    /// Period `2^(k + 1)` is not realized at this height.
    pub upper: Rat,
    /// The simplest rational strictly between `lower` and `upper`.
    pub height: Rat,
}

/// Pieces allowed in the powers probed while bracketing a threshold. Above the
/// thresholds the number of laps grows exponentially, so large powers are cut short.
const PROBE_CAP: usize = 1 << 16;

/// Whether `f` has a point of least period `2^j`: fixed by `f^(2^j)` and not by
/// `f^(2^(j-1))`. Powers are built by repeated squaring.
fn has_period_power_of_two(f: &MarkovTreeMap, j: u32, cap: usize) -> Result<bool, MarkovError> {
    debug_assert!(j >= 1);
    let mut half = f.clone();
    for _ in 1..j {
        half = half.compose_capped(&half, Exec::default(), cap)?;
    }
    let full = half.compose_capped(&half, Exec::default(), cap)?;
    let (own, below) = (fixed_points(&full), fixed_points(&half));
    Ok(own.points.iter().any(|x| !below.contains(f, x))
        || own.segments.iter().any(|(e, a, b)| !below.covers(*e, a, b)))
}

/// Brackets the height where period `2^j` first appears, starting from a
/// height `lo` where it is absent, until the bracket is shorter than `tol`.
fn bracket(j: u32, mut lo: Rat, step: Rat, tol: &Rat) -> Result<(Rat, Rat), MarkovError> {
    if has_period_power_of_two(&truncated_tent(&lo)?, j, PIECE_CAP)? {
        return Err(MarkovError::Invalid(format!("period 2^{j} already present at height {lo}")));
    }
    let mut step = step;
    let mut hi = loop {
        let mut b = &lo + &step;
        if b > Rat::one() {
            b = Rat::one();
        }
        match has_period_power_of_two(&truncated_tent(&b)?, j, PROBE_CAP) {
            Ok(true) => break b,
            Ok(false) if b.is_one() => {
                return Err(MarkovError::Invalid(format!("the tent map lacks period 2^{j}")))
            }
            Ok(false) => {
                lo = b;
                step = step * int(2);
            }
            Err(MarkovError::BoundExceeded(_)) => step = step / int(4),
            Err(e) => return Err(e),
        }
    };
    while &(&hi - &lo) > tol {
        // the simplest rational in the middle half keeps denominators small
        let quarter = (&hi - &lo) / int(4);
        let mid = simplest_between(&(&lo + &quarter), &(&hi - &quarter));
        // too many laps means positive entropy, hence every power of two; the
        // chosen height is verified exactly at the end
        match has_period_power_of_two(&truncated_tent(&mid)?, j, PROBE_CAP) {
            Ok(true) | Err(MarkovError::BoundExceeded(_)) => hi = mid,
            Ok(false) => lo = mid,
            Err(e) => return Err(e),
        }
    }
    Ok((lo, hi))
}

/// The window of truncation heights with period set exactly `{1, 2, ..., 2^k}`,
/// for `k ≤ 4`. Uses that the period set grows with the height.
pub fn truncated_tent_window(k: u32) -> Result<TentWindow, MarkovError> {
    if k > 4 {
        return Err(MarkovError::BoundExceeded(format!(
            "truncated tent windows are computed for k <= 4, not {k}"
        )));
    }
    let mut found: Vec<(Rat, Rat)> = vec![(Rat::zero(), Rat::zero())];
    let mut prev_hi = Rat::zero();
    for j in 1..=k + 1 {
        let below = found.last().expect("nonempty").1.clone();
        let gap = if j == 1 { rat(1, 2) } else { &below - &prev_hi };
        prev_hi = below.clone();
        // thresholds accumulate geometrically; a bracket far below the last gap
        // separates consecutive thresholds
        let tol = &gap / int(1 << 12);
        found.push(bracket(j, below, gap, &tol)?);
    }
    let lower = found[k as usize].1.clone();
    let upper = found[k as usize + 1].0.clone();
    let height = simplest_between(&lower, &upper);
    let f = truncated_tent(&height)?;
    let bound = (1u32 << k).max(2).min(MAX_PERIOD_BOUND);
    let realized = exact_periods(&f, bound)?.realized;
    if realized != (0..=k).map(|i| 1u64 << i).collect::<Vec<_>>()
        || has_period_power_of_two(&f, k + 1, PIECE_CAP)?
    {
        return Err(MarkovError::Invalid(format!(
            "height {height} does not realize exactly the powers of two up to 2^{k}"
        )));
    }
    Ok(TentWindow {
        k,
        lower,
        upper,
        height,
    })
}

/// The rational with smallest denominator strictly between `lo < hi`, both nonnegative.
fn simplest_between(lo: &Rat, hi: &Rat) -> Rat {
    let n = lo.floor();
    if &(&n + Rat::one()) < hi {
        return n + Rat::one();
    }
    let ylo = (hi - &n).recip();
    let y = if lo == &n {
        ylo.floor() + Rat::one()
    } else {
        simplest_between(&ylo, &(lo - &n).recip())
    };
    n + y.recip()
}

/// A map by name: `identity`, `tent`, `stefan:K` or `truncated-tent:K`.
pub fn builtin(name: &str) -> Result<MarkovTreeMap, MarkovError> {
    let (kind, arg) = match name.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (name, None),
    };
    let number = || -> Result<u32, MarkovError> {
        arg.and_then(|a| a.parse().ok())
            .ok_or_else(|| MarkovError::Parse(format!("{name}: expected {kind}:<integer>")))
    };
    match kind {
        "identity" => Ok(identity()),
        "tent" => Ok(tent()),
        "stefan" => stefan_map(number()? as usize),
        "truncated-tent" => truncated_tent(&truncated_tent_window(number()?)?.height),
        _ => Err(MarkovError::Parse(format!("unknown map {name:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::markov::periods::exact_periods_unchecked;
    use crate::markov::{exact_periods, Point, SharkType};
    use rand::SeedableRng;

    fn q(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn stefan_five_permutation() {
        let f = stefan_map(5).unwrap();
        let images: Vec<usize> = (0..5).map(|v| f.vertex_image(v).unwrap() + 1).collect();
        assert_eq!(images, vec![3, 5, 4, 2, 1]);
        let f = stefan_map(3).unwrap();
        let images: Vec<usize> = (0..3).map(|v| f.vertex_image(v).unwrap() + 1).collect();
        assert_eq!(images, vec![2, 3, 1]);
        assert!(stefan_map(4).is_err());
    }

    #[test]
    fn graph_pieces_split_at_vertices() {
        let t = truncated_tent(&q("4/5")).unwrap();
        assert_eq!(t.coordinates().unwrap().len(), 5);
        assert_eq!(t.eval_coordinate(&q("1/10")), Some(q("1/5")));
        assert_eq!(t.eval_coordinate(&q("1/2")), Some(q("4/5")));
        assert_eq!(t.eval_coordinate(&q("7/8")), Some(q("1/4")));
        for p in t.pieces() {
            // every non-constant piece lies over a single edge
            assert!(p.t0 >= q("0") && p.t1 <= q("1"));
        }
    }

    #[test]
    fn star_maps_send_vertices_to_vertices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = random_star_map(&mut rng, 3);
            for v in 0..4 {
                assert!(f.vertex_image(v).is_some());
            }
            assert!(matches!(f.eval(&Point::Vertex(0)), Point::Vertex(_)));
        }
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&q("1/3"), &q("1/2")), q("2/5"));
        assert_eq!(simplest_between(&q("0"), &q("1/3")), q("1/4"));
        assert_eq!(simplest_between(&q("2/3"), &q("5/2")), q("1"));
        assert_eq!(simplest_between(&q("3/5"), &q("2/3")), q("5/8"));
    }

    #[test]
    fn truncated_tent_windows() {
        for k in 0..=3 {
            let w = truncated_tent_window(k).unwrap();
            assert!(w.lower < w.height && w.height < w.upper);
            let ps = exact_periods(&truncated_tent(&w.height).unwrap(), 16).unwrap();
            let powers: Vec<u64> = (0..=k).map(|i| 1 << i).collect();
            assert_eq!(ps.realized, powers, "k = {k}");
            assert_eq!(ps.classification(), Some(SharkType::Finite(1 << k)));
        }
    }

    #[test]
    fn sixteen_without_thirty_two() {
        let w = truncated_tent_window(4).unwrap();
        let f = truncated_tent(&w.height).unwrap();
        let (ps, _) = exact_periods_unchecked(&f, 32, Exec::default()).unwrap();
        assert_eq!(ps.realized, vec![1, 2, 4, 8, 16]);
    }

    #[test]
    fn builtins() {
        assert_eq!(builtin("tent").unwrap(), tent());
        assert!(builtin("stefan:5").is_ok());
        assert!(builtin("stefan").is_err());
        assert!(builtin("cubic").is_err());
    }
}
