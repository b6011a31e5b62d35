//! Property tests pinning the library against its brute-force oracles on
//! arbitrary inputs.

use ipmx::compression;
use ipmx::oracle;
use ipmx::queries;
use ipmx::text::{lcp_fragments, merge_progressions, ArithProgression, Fragment};
use ipmx::{IndexConfig, IpmIndex, Text};
use proptest::prelude::*;

fn build(bytes: &[u8], seed: u64) -> IpmIndex {
    let config = IndexConfig {
        seed,
        ..IndexConfig::default()
    };
    IpmIndex::build(Text::new(bytes.to_vec()).unwrap(), config).unwrap()
}

prop_compose! {
    fn text_and_pair()(text in "[ab]{2,48}")(
        xs in 1..=text.len(),
        xe_off in 0usize..text.len(),
        ys in 1..=text.len(),
        ye_off in 0usize..text.len(),
        seed in any::<u64>(),
        text in Just(text),
    ) -> (Vec<u8>, Fragment, Fragment, u64) {
        let n = text.len();
        let xe = (xs + xe_off).min(n);
        let ye = (ys + ye_off).min(n);
        (text.into_bytes(), Fragment::new(xs, xe), Fragment::new(ys, ye), seed)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ipm_matches_naive_scan((bytes, x, y, seed) in text_and_pair()) {
        let ix = build(&bytes, seed);
        let want = oracle::naive_ipm(&bytes, (x.start, x.end), (y.start, y.end));
        if y.len() <= 2 * x.len() {
            let got = ix.ipm_query(x, y).unwrap();
            prop_assert_eq!(got.to_vec(), want.clone());
            // With three or more occurrences the difference is the period.
            if got.count >= 3 {
                let mut periods = oracle::naive_periods(&bytes, (x.start, x.end));
                periods.sort_unstable();
                prop_assert_eq!(got.diff, periods[0]);
            }
        }
        let progs = ix.ipm_query_long(x, y).unwrap();
        let mut all: Vec<usize> = progs.iter().flat_map(|p| p.to_vec()).collect();
        all.sort_unstable();
        prop_assert_eq!(all, want);
    }

    #[test]
    fn applications_match_oracles((bytes, x, y, seed) in text_and_pair()) {
        let ix = build(&bytes, seed);
        let xt = (x.start, x.end);
        let yt = (y.start, y.end);

        let mut periods = oracle::naive_periods(&bytes, xt);
        periods.sort_unstable();
        prop_assert_eq!(queries::period_query(&ix, x).unwrap().to_vec(), periods.clone());

        let (periodic, p) = queries::two_period_query(&ix, x);
        prop_assert_eq!(periodic, 2 * periods[0] <= x.len());
        if periodic {
            prop_assert_eq!(p, Some(periods[0]));
        }

        let d = 1 + (x.start + y.start) % 8;
        prop_assert_eq!(
            queries::prefix_suffix(&ix, x, y, d).unwrap().to_vec(),
            oracle::naive_prefix_suffix(&bytes, xt, yt, d)
        );

        let (l, _) = compression::blcp(&ix, x, y).unwrap();
        prop_assert_eq!(l, oracle::naive_blcp(&bytes, xt, yt));

        prop_assert_eq!(
            compression::occurs_in(&ix, x, y),
            !oracle::naive_ipm(&bytes, xt, yt).is_empty()
        );

        if x.len() == y.len() {
            prop_assert_eq!(
                queries::cyclic_equivalence(&ix, x, y).unwrap().to_vec(),
                oracle::naive_rotations(&bytes, xt, yt)
            );
        }

        let phrases = compression::gsc(&ix, x, y).unwrap();
        prop_assert_eq!(
            compression::decode_gsc(&bytes[y.start - 1..y.end], &phrases),
            &bytes[x.start - 1..x.end]
        );
    }

    #[test]
    fn lcp_of_concatenations_matches_scan(
        text in "[abc]{2,32}",
        cuts in prop::collection::vec((1usize..32, 1usize..32), 1..3),
    ) {
        let bytes = text.as_bytes();
        let n = bytes.len();
        let t = Text::new(bytes.to_vec()).unwrap();
        let ix = ipmx::TextIndex::build(&t);
        let frags: Vec<Fragment> = cuts
            .iter()
            .map(|&(s, e)| {
                let s = 1 + (s - 1) % n;
                Fragment::new(s, (s + e).min(n))
            })
            .collect();
        let word: Vec<u8> = frags
            .iter()
            .flat_map(|f| bytes[f.start - 1..f.end].to_vec())
            .collect();
        let whole = Fragment::new(1, n);
        let got = lcp_fragments(&ix, &frags, &[whole]);
        let want = word.iter().zip(bytes).take_while(|(a, b)| a == b).count();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn merged_progressions_preserve_element_sets(
        first in 1usize..50,
        diff in 1usize..6,
        counts in prop::collection::vec(1usize..5, 1..5),
    ) {
        // Chained parts split from one progression merge back to it.
        let total: usize = counts.iter().sum();
        let whole = ArithProgression::new(first, diff, total);
        let mut parts = Vec::new();
        let mut cursor = first;
        for &c in &counts {
            parts.push(ArithProgression::new(cursor, diff, c));
            cursor += c * diff;
        }
        let merged = merge_progressions(&parts, diff).unwrap();
        prop_assert_eq!(merged.to_vec(), whole.to_vec());
    }
}
