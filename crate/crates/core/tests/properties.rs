use std::collections::BTreeSet;
use std::sync::Arc;

use arnn::codec::{
    cantor_decode, cantor_encode, decode_membership, encode_language, index_of_string, is_cantor4, string_of_index,
    Alphabet, Language, OracleTable,
};
use arnn::compile::{dfa_to_net, Dfa};
use arnn::degrees::{classify_network, maximals, DegreeLabel, DegreeOrder};
use arnn::network::{Activation, InputFrame, Network, NetworkBuilder, Source};
use arnn::numerics::{saturated_sigma, signal, ExactScalar, PrecisionBudget, Rational, UnitReal, Value};
use arnn::spike::{timing_decode, timing_encode, SpikeSchedule};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn big(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn rat(p: i64, q: i64) -> Rational {
    Rational::from(big(p, q))
}

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![1..i64::MAX, i64::MIN + 1..0]
}

fn small_ratio() -> impl Strategy<Value = (i64, i64)> {
    (-40i64..=40, 1i64..=12)
}

fn word(alphabet: &'static str, max: usize) -> impl Strategy<Value = String> {
    let symbols: Vec<char> = alphabet.chars().collect();
    proptest::collection::vec(proptest::sample::select(symbols), 0..=max).prop_map(|v| v.into_iter().collect())
}

proptest! {
    #[test]
    fn rational_arithmetic_matches_bigrational(a in any::<i64>(), b in nonzero(), c in any::<i64>(), d in nonzero()) {
        let (x, y) = (rat(a, b), rat(c, d));
        let (bx, by) = (big(a, b), big(c, d));
        prop_assert_eq!((&x + &y).to_big(), &bx + &by);
        prop_assert_eq!((&x - &y).to_big(), &bx - &by);
        prop_assert_eq!((&x * &y).to_big(), &bx * &by);
        prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
        prop_assert_eq!((-&x).to_big(), -bx.clone());
        prop_assert_eq!(x.to_string().parse::<Rational>().unwrap(), x);
    }

    #[test]
    fn rationals_stay_in_lowest_terms(a in any::<i64>(), b in nonzero()) {
        let x = rat(a, b);
        let g = num_integer::Integer::gcd(&x.numer(), &x.denom());
        prop_assert_eq!(g, BigInt::from(1));
        prop_assert!(x.denom() > BigInt::from(0));
    }

    #[test]
    fn sigma_is_idempotent_and_confined((p, q) in small_ratio()) {
        let v = Value::exact(rat(p, q));
        let s = saturated_sigma(&v, None).unwrap();
        let q1 = s.as_exact().unwrap().clone();
        prop_assert!(q1.is_in_unit());
        let again = saturated_sigma(&s, None).unwrap();
        prop_assert_eq!(again.as_exact(), Some(&q1));
        let expected = if p < 0 { big(0, 1) } else if p > q { big(1, 1) } else { big(p, q) };
        prop_assert_eq!(q1.to_big(), expected);
        prop_assert_eq!(signal(&v, None).unwrap(), p > 0);
    }

    #[test]
    fn cantor_roundtrip(bits in proptest::collection::vec(any::<bool>(), 0..48)) {
        let x = cantor_encode(&bits);
        prop_assert!(is_cantor4(&x));
        prop_assert_eq!(cantor_decode(&x).unwrap(), bits.clone());
        if !bits.is_empty() {
            prop_assert!(x >= rat(1, 4) && x < rat(1, 1));
        }
    }

    #[test]
    fn index_is_a_bijection(w in word("abc", 9), i in 1u64..200_000) {
        let abc = Alphabet::parse("abc").unwrap();
        let n = index_of_string(&w, &abc).unwrap();
        prop_assert_eq!(string_of_index(n, &abc).unwrap(), w);
        prop_assert_eq!(index_of_string(&string_of_index(i, &abc).unwrap(), &abc).unwrap(), i);
    }

    #[test]
    fn index_follows_length_lex(u in word("ab", 8), v in word("ab", 8)) {
        let ab = Alphabet::parse("ab").unwrap();
        let by_index = index_of_string(&u, &ab).unwrap().cmp(&index_of_string(&v, &ab).unwrap());
        prop_assert_eq!(by_index, (u.len(), &u).cmp(&(v.len(), &v)));
    }

    #[test]
    fn finite_languages_roundtrip_through_reals(members in proptest::collection::btree_set(word("ab", 4), 0..10)) {
        let ab = Alphabet::parse("ab").unwrap();
        let lang = Language::finite(ab.clone(), members.iter().cloned()).unwrap();
        let r = encode_language(&lang, 31).unwrap();
        for w in ab.words_up_to(4) {
            prop_assert_eq!(decode_membership(&r, &w, &ab).unwrap(), members.contains(&w));
        }
    }

    #[test]
    fn enclosures_contain_fractions((p, q) in (0i64..97, 97i64..200), k in 0u64..40) {
        let x = rat(p, q);
        let r = UnitReal::from_rational(&x, 2).unwrap();
        let e = r.enclosure(k).unwrap();
        prop_assert!(e.contains(&x));
        prop_assert_eq!(e.width(), Rational::inverse_power(2, k as u32));
    }

    #[test]
    fn spike_roundtrip(window in 0u64..=64, seed in any::<u64>()) {
        let ticks: Vec<u64> = (1..=window).filter(|t| (seed.rotate_left(*t as u32) ^ t) & 1 == 1).collect();
        let s = SpikeSchedule::new(ticks, window, Some(DegreeLabel::jump())).unwrap();
        let r = timing_decode(&s);
        prop_assert_eq!(r.label(), Some(&DegreeLabel::jump()));
        prop_assert_eq!(timing_encode(&r, window).unwrap(), s);
    }

    #[test]
    fn oracle_table_text_roundtrip(bits in proptest::collection::vec(any::<bool>(), 0..64)) {
        let t = OracleTable::from_bits(bits.clone());
        let back = OracleTable::parse(&t.to_text()).unwrap();
        prop_assert_eq!(back.bits(), &bits[..]);
        prop_assert_eq!(back.horizon(), bits.len() as u64);
    }
}

#[derive(Clone, Debug)]
struct RandomNet {
    signal: Vec<bool>,
    bias: Vec<(i64, i64)>,
    state_w: Vec<Vec<Option<(i64, i64)>>>,
    input_w: Vec<Vec<Option<(i64, i64)>>>,
}

fn random_net(max_n: usize, m: usize) -> impl Strategy<Value = RandomNet> {
    (1..=max_n).prop_flat_map(move |n| {
        let w = proptest::option::of((-4i64..=4, 1i64..=4));
        (
            proptest::collection::vec(any::<bool>(), n),
            proptest::collection::vec((-4i64..=4, 1i64..=4), n),
            proptest::collection::vec(proptest::collection::vec(w.clone(), n), n),
            proptest::collection::vec(proptest::collection::vec(w, m + 1), n),
        )
            .prop_map(|(signal, bias, state_w, input_w)| RandomNet { signal, bias, state_w, input_w })
    })
}

impl RandomNet {
    fn build(&self) -> Network {
        let n = self.signal.len();
        let m = self.input_w[0].len() - 1;
        let mut b = NetworkBuilder::new(m);
        let ids: Vec<_> = (0..n)
            .map(|i| b.neuron(if self.signal[i] { Activation::Signal } else { Activation::SaturatedLinear }, &format!("n{i}")))
            .collect();
        for i in 0..n {
            b.bias_ratio(ids[i], self.bias[i].0, self.bias[i].1);
            for (j, w) in self.state_w[i].iter().enumerate() {
                if let Some((p, q)) = w {
                    b.connect_ratio(ids[i], ids[j], *p, *q);
                }
            }
            for (j, w) in self.input_w[i].iter().enumerate() {
                if let Some((p, q)) = w {
                    let src = if j == m { Source::Validation } else { Source::Input(j) };
                    b.connect_ratio(ids[i], src, *p, *q);
                }
            }
        }
        b.set_outputs(ids[0], ids[n - 1]);
        b.build().unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn update_order_is_irrelevant(
        spec in random_net(8, 2),
        inputs in proptest::collection::vec((any::<[bool; 2]>(), any::<bool>()), 1..12),
        order_seed in proptest::collection::vec(any::<u32>(), 8),
    ) {
        let net = spec.build();
        let budget = PrecisionBudget::digits(64).unwrap();
        let n = net.n_neurons();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| order_seed[i]);
        let (mut a, mut b) = (net.initial_state(), net.initial_state());
        for (data, valid) in inputs {
            let frame = InputFrame::new(data.to_vec(), valid);
            a = net.step(&a, &frame, &budget).unwrap();
            b = net.step_ordered(&b, &frame, &budget, order.iter().rev().copied()).unwrap();
            prop_assert_eq!(a.as_rationals(), b.as_rationals());
        }
    }

    #[test]
    fn network_text_roundtrip(spec in random_net(6, 1)) {
        let net = spec.build();
        let back = Network::parse(&net.to_text().unwrap(), std::path::Path::new(".")).unwrap();
        prop_assert_eq!(back.to_text().unwrap(), net.to_text().unwrap());
        prop_assert_eq!(back.n_neurons(), net.n_neurons());
    }

    #[test]
    fn rational_weights_never_lower_the_class(spec in random_net(6, 1), pick in any::<prop::sample::Index>()) {
        let net = spec.build();
        let order = DegreeOrder::builtin();
        let before = classify_network(&net, &BTreeSet::new(), &order).unwrap();
        let total = net.scalars().count();
        let target = pick.index(total.max(1));
        let mut seen = 0;
        let swapped = net
            .map_scalars(|s| {
                let hit = seen == target;
                seen += 1;
                if hit && s.is_integer() {
                    ExactScalar::rational(&s.as_rational().unwrap() + &rat(1, 2))
                } else {
                    s.clone()
                }
            })
            .unwrap();
        let after = classify_network(&swapped, &BTreeSet::new(), &order).unwrap();
        prop_assert!(after.rank() >= before.rank());
    }

    #[test]
    fn maximals_idempotent_and_inside(edges in proptest::collection::vec((0usize..6, 0usize..6), 0..12), pick in proptest::collection::vec(any::<bool>(), 6)) {
        let names: Vec<DegreeLabel> = (0..6).map(|i| DegreeLabel::new(format!("x{i}"))).collect();
        let mut order = DegreeOrder::builtin();
        names.iter().for_each(|l| order.add_label(l.clone()));
        for (a, b) in edges {
            if a < b {
                order.declare_below(&names[a], &names[b]).unwrap();
            }
        }
        let set: BTreeSet<DegreeLabel> = names.iter().zip(&pick).filter(|(_, &p)| p).map(|(l, _)| l.clone()).collect();
        let max = maximals(&set, &order).unwrap();
        prop_assert!(max.is_subset(&set));
        prop_assert_eq!(maximals(&max, &order).unwrap(), max.clone());
        prop_assert_eq!(set.is_empty(), max.is_empty());
    }

    #[test]
    fn dfa_nets_agree_with_their_automaton(
        table in proptest::collection::vec((0usize..4, 0usize..4), 4),
        accepting in any::<[bool; 4]>(),
        words in proptest::collection::vec(word("ab", 9), 1..20),
    ) {
        let mut text = String::from("alphabet ab\n");
        for (q, acc) in accepting.iter().enumerate() {
            text += &format!("state q{q}{}{}\n", if *acc { " accept" } else { "" }, if q == 0 { " start" } else { "" });
        }
        for (q, (a, b)) in table.iter().enumerate() {
            text += &format!("trans q{q} a q{a}\ntrans q{q} b q{b}\n");
        }
        let dfa = Dfa::parse(&text).unwrap();
        let net = dfa_to_net(&dfa).unwrap();
        for w in words {
            let mut q = 0;
            for c in w.chars() {
                q = if c == 'a' { table[q].0 } else { table[q].1 };
            }
            let out = arnn::network::run(&net, &w, w.len() + 2).unwrap();
            prop_assert_eq!(out.verdict == arnn::network::Verdict::Accept, accepting[q]);
        }
    }
}

#[test]
fn oracle_scalars_carry_their_table() {
    let t = Arc::new(OracleTable::from_bits(vec![true, false, true]));
    let s = ExactScalar::oracle(t, arnn::numerics::Packing::Cantor4);
    assert!(!s.is_exact());
    assert_eq!(s.as_real().unwrap().horizon(), Some(3));
}
