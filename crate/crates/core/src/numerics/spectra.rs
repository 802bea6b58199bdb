use super::matrix::C64;

/// Largest distance in a greedy nearest-neighbour pairing of two complex
/// multisets; `f64::INFINITY` when the sizes differ.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("sizes match");
        used[idx] = true;
        worst = worst.max(d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_match() {
        let a = [C64::new(1.0, 0.0), C64::new(0.0, 2.0), C64::new(1.0, 0.0)];
        let b = [C64::new(0.0, 2.0), C64::new(1.0, 0.0), C64::new(1.0, 1e-9)];
        assert!(multiset_distance(&a, &b) < 2e-9);
        assert_eq!(multiset_distance(&a, &b[..2]), f64::INFINITY);
    }
}
