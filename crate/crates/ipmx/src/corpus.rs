//! Test corpora: random texts over small alphabets and the adversarial
//! families (unary, two-letter powers, Fibonacci, Thue-Morse).

use crate::rng::Rng;

pub fn random_text(rng: &mut Rng, n: usize, sigma: u8) -> Vec<u8> {
    (0..n)
        .map(|_| b'a' + rng.below(sigma as u64) as u8)
        .collect()
}

pub fn unary(n: usize) -> Vec<u8> {
    vec![b'a'; n]
}

pub fn alternating(n: usize) -> Vec<u8> {
    (0..n)
        .map(|i| if i % 2 == 0 { b'a' } else { b'b' })
        .collect()
}

/// Prefix of the infinite Fibonacci word, a run-dense text.
pub fn fibonacci(n: usize) -> Vec<u8> {
    let mut prev: Vec<u8> = vec![b'b'];
    let mut cur: Vec<u8> = vec![b'a'];
    while cur.len() < n {
        let next: Vec<u8> = cur.iter().chain(prev.iter()).copied().collect();
        prev = cur;
        cur = next;
    }
    cur.truncate(n);
    cur
}

/// Prefix of the Thue-Morse word, which is overlap-free.
pub fn thue_morse(n: usize) -> Vec<u8> {
    (0..n)
        .map(|i: usize| if i.count_ones() % 2 == 0 { b'a' } else { b'b' })
        .collect()
}

/// The adversarial family at a fixed size, labelled.
pub fn adversarial(n: usize) -> Vec<(&'static str, Vec<u8>)> {
    vec![
        ("unary", unary(n)),
        ("alternating", alternating(n)),
        ("fibonacci", fibonacci(n)),
        ("thue-morse", thue_morse(n)),
    ]
}
