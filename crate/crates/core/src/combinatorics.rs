//! Small enumeration helpers shared by the modules and their tests.

/// All strictly increasing `k`-tuples from `1..=n`, in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            if n - i + 1 < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Prime factors of `n` with multiplicity, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        while n.is_multiple_of(q) {
            out.push(q);
            n /= q;
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets() {
        assert_eq!(k_subsets(4, 2).len(), 6);
        assert_eq!(k_subsets(4, 2)[0], vec![1, 2]);
        assert_eq!(k_subsets(4, 2)[5], vec![3, 4]);
        assert_eq!(k_subsets(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(k_subsets(7, 3).len() as u128, binomial(7, 3));
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(30), vec![2, 3, 5]);
        assert_eq!(prime_factors(12), vec![2, 2, 3]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert!(is_prime(7));
        assert!(!is_prime(9));
        assert!(!is_prime(1));
    }
}
