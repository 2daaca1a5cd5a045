//! Suggestion ranking: edit distance to allowed surfaces, ties broken by
//! list order.

pub const DEFAULT_SUGGESTIONS: usize = 5;

/// Levenshtein distance over chars.
pub fn edit_distance(a: &str, b: &str) -> usize {
    bounded(a, b, usize::MAX).expect("unbounded")
}

// Levenshtein distance, or None once it provably exceeds `limit`.
fn bounded(a: &str, b: &str, limit: usize) -> Option<usize> {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.len().abs_diff(b.len()) > limit {
        return None;
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        let mut row_min = cur[0];
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
            row_min = row_min.min(cur[j + 1]);
        }
        if row_min > limit {
            return None;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    Some(prev[b.len()]).filter(|d| *d <= limit)
}

/// The `limit` closest entries of `ranked` (already in tie-break order).
pub(crate) fn rank(surface: &str, ranked: &[String], limit: usize) -> Vec<String> {
    if limit == 0 {
        return Vec::new();
    }
    // (distance, position in ranked), kept sorted
    let mut best: Vec<(usize, usize)> = Vec::with_capacity(limit + 1);
    for (pos, candidate) in ranked.iter().enumerate() {
        // a later candidate only wins on strictly smaller distance
        let limit_now = if best.len() == limit {
            match best.last().unwrap().0.checked_sub(1) {
                Some(l) => l,
                None => break,
            }
        } else {
            usize::MAX
        };
        if let Some(d) = bounded(surface, candidate, limit_now) {
            let at = best.partition_point(|&(bd, _)| bd <= d);
            best.insert(at, (d, pos));
            best.truncate(limit);
        }
    }
    best.into_iter().map(|(_, pos)| ranked[pos].clone()).collect()
}
