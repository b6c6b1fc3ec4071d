use crate::order::Poset;

type Signature = (usize, usize, usize, usize, usize);

fn signatures(p: &Poset) -> Vec<Signature> {
    let h = p.heights();
    (0..p.len())
        .map(|x| {
            (
                h[x],
                p.lower_covers(x).len(),
                p.upper_covers(x).len(),
                p.down_set(x).count_ones(..),
                p.up_set(x).count_ones(..),
            )
        })
        .collect()
}

/// An order isomorphism `p → q` as a vector `map[x] = image`, if one exists.
pub fn poset_iso(p: &Poset, q: &Poset) -> Option<Vec<usize>> {
    let n = p.len();
    if n != q.len() || p.covers().len() != q.covers().len() {
        return None;
    }
    let sp = signatures(p);
    let sq = signatures(q);
    let mut a = sp.clone();
    let mut b = sq.clone();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return None;
    }
    // rarest signature classes first
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (sp.iter().filter(|&&s| s == sp[x]).count(), sp[x].0, x));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(p, q, &sp, &sq, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    p: &Poset,
    q: &Poset,
    sp: &[Signature],
    sq: &[Signature],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&x) = order.get(depth) else {
        return true;
    };
    for y in 0..q.len() {
        if used[y] || sp[x] != sq[y] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&w| {
            let v = map[w];
            p.leq(w, x) == q.leq(v, y) && p.leq(x, w) == q.leq(y, v)
        });
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if extend(p, q, sp, sq, order, depth + 1, map, used) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}

pub fn is_isomorphic(p: &Poset, q: &Poset) -> bool {
    poset_iso(p, q).is_some()
}

/// Replaces `j` by a two-element chain with the same outside comparabilities.
///
/// `j` keeps its id as the lower copy; the upper copy gets the new id `n`.
pub fn poset_double(p: &Poset, j: usize) -> Poset {
    let n = p.len();
    let orig = |x: usize| if x == n { j } else { x };
    Poset::from_leq(n + 1, |a, b| {
        if a == b {
            return true;
        }
        match (a, b) {
            (x, y) if x == j && y == n => true,
            (x, y) if x == n && y == j => false,
            _ => p.leq(orig(a), orig(b)),
        }
    })
    .expect("doubling preserves antisymmetry")
}
