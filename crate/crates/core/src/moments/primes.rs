use std::sync::RwLock;

static PRIMES: RwLock<Vec<u64>> = RwLock::new(Vec::new());

/// Upper bound for `p_n` (Rosser), padded for tiny `n`.
fn sieve_limit(count: usize) -> usize {
    let n = count.max(6) as f64;
    (n * (n.ln() + n.ln().ln())) as usize + 16
}

fn sieve(limit: usize) -> Vec<u64> {
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn ensure(count: usize) {
    if PRIMES.read().unwrap_or_else(|e| e.into_inner()).len() >= count {
        return;
    }
    let mut guard = PRIMES.write().unwrap_or_else(|e| e.into_inner());
    if guard.len() >= count {
        return;
    }
    let target = count.max(2 * guard.len()).max(1024);
    *guard = sieve(sieve_limit(target));
}

/// The `n`-th prime, 1-based (`nth_prime(1) == 2`).
pub fn nth_prime(n: u64) -> u64 {
    assert!(n >= 1, "primes are indexed from 1");
    ensure(n as usize);
    PRIMES.read().unwrap_or_else(|e| e.into_inner())[n as usize - 1]
}

/// Primes `p_from, …, p_{from+count−1}`.
pub fn prime_range(from: u64, count: usize) -> Vec<u64> {
    assert!(from >= 1, "primes are indexed from 1");
    let end = from as usize - 1 + count;
    ensure(end);
    PRIMES.read().unwrap_or_else(|e| e.into_inner())[from as usize - 1..end].to_vec()
}
