//! Element subsets of small universes as bitmasks.

use super::Elem;

/// A subset of a universe of at most 64 elements.
pub type Mask = u64;

pub const MAX_UNIVERSE: usize = 64;

pub fn full(n: usize) -> Mask {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn mask_of(elems: &[Elem]) -> Mask {
    elems.iter().fold(0, |m, &e| m | (1u64 << e))
}

pub fn elements(mask: Mask) -> Vec<Elem> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out.push(i);
        m &= m - 1;
    }
    out
}

pub fn contains(mask: Mask, e: Elem) -> bool {
    mask & (1u64 << e) != 0
}

pub fn is_subset(a: Mask, b: Mask) -> bool {
    a & !b == 0
}

/// All subsets of `mask`, ordered by size and then lexicographically on the
/// sorted element lists. This is the order in which checkers report their
/// least witness.
pub fn subsets_of(mask: Mask) -> Vec<Mask> {
    let elems = elements(mask);
    let mut out = Vec::with_capacity(1usize << elems.len().min(20));
    for k in 0..=elems.len() {
        combinations(&elems, k, &mut |c| out.push(mask_of(c)));
    }
    out
}

pub fn subsets(n: usize) -> Vec<Mask> {
    subsets_of(full(n))
}

fn combinations(elems: &[Elem], k: usize, visit: &mut impl FnMut(&[Elem])) {
    fn go(
        elems: &[Elem],
        k: usize,
        start: usize,
        cur: &mut Vec<Elem>,
        visit: &mut impl FnMut(&[Elem]),
    ) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..elems.len() {
            if elems.len() - i < k - cur.len() {
                break;
            }
            cur.push(elems[i]);
            go(elems, k, i + 1, cur, visit);
            cur.pop();
        }
    }
    go(elems, k, 0, &mut Vec::with_capacity(k), visit);
}

/// Renders a subset as `{0,2,3}`.
pub fn render(mask: Mask) -> String {
    let items: Vec<String> = elements(mask).iter().map(|e| e.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// Sort key realising the size-then-lex order of [`subsets_of`].
pub fn order_key(mask: Mask) -> (u32, Vec<Elem>) {
    (mask.count_ones(), elements(mask))
}

pub fn sort(masks: &mut [Mask]) {
    masks.sort_by_cached_key(|&m| order_key(m));
}

/// Image of `mask` under an element map.
pub fn image(mask: Mask, map: &[Elem]) -> Mask {
    elements(mask).iter().fold(0, |m, &e| m | (1u64 << map[e]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_order_is_size_then_lex() {
        let s = subsets(3);
        let rendered: Vec<String> = s.iter().map(|&m| render(m)).collect();
        assert_eq!(
            rendered,
            vec!["{}", "{0}", "{1}", "{2}", "{0,1}", "{0,2}", "{1,2}", "{0,1,2}"]
        );
    }

    #[test]
    fn elements_roundtrip() {
        assert_eq!(elements(mask_of(&[4, 1, 7])), vec![1, 4, 7]);
        assert_eq!(full(0), 0);
        assert_eq!(full(3), 0b111);
    }
}
