//! Maximum bipartite matching by augmenting paths.

/// Maximum matching between left vertices `0..left.len()` and right
/// vertices `0..right_count`, where `left[i]` lists the right neighbours of
/// `i`. Returns the partner of every left vertex.
pub fn max_matching(left: &[Vec<usize>], right_count: usize) -> Vec<Option<usize>> {
    let mut match_right: Vec<Option<usize>> = vec![None; right_count];
    let mut seen = vec![usize::MAX; right_count];
    for i in 0..left.len() {
        augment(i, i, left, &mut match_right, &mut seen);
    }
    let mut match_left = vec![None; left.len()];
    for (j, m) in match_right.iter().enumerate() {
        if let Some(i) = *m {
            match_left[i] = Some(j);
        }
    }
    match_left
}

fn augment(
    i: usize,
    stamp: usize,
    left: &[Vec<usize>],
    match_right: &mut [Option<usize>],
    seen: &mut [usize],
) -> bool {
    for &j in &left[i] {
        if seen[j] == stamp {
            continue;
        }
        seen[j] = stamp;
        let free = match match_right[j] {
            None => true,
            Some(other) => augment(other, stamp, left, match_right, seen),
        };
        if free {
            match_right[j] = Some(i);
            return true;
        }
    }
    false
}

/// A matching covering every left vertex, if one exists.
pub fn saturating_matching(left: &[Vec<usize>], right_count: usize) -> Option<Vec<usize>> {
    max_matching(left, right_count).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_augmenting_paths() {
        // Greedy would match 0-0 and leave 1 stranded.
        let left = vec![vec![0, 1], vec![0]];
        assert_eq!(saturating_matching(&left, 2), Some(vec![1, 0]));
    }

    #[test]
    fn hall_violation() {
        let left = vec![vec![0], vec![0], vec![1, 2]];
        let m = max_matching(&left, 3);
        assert_eq!(m.iter().flatten().count(), 2);
        assert!(saturating_matching(&left, 3).is_none());
        assert_eq!(saturating_matching(&[], 0), Some(vec![]));
    }
}
