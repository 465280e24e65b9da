use hyperstat::FieldSpec;
use proptest::prelude::*;

const FIELDS: &[(u64, u32)] = &[(3, 1), (5, 1), (7, 1), (101, 1), (3, 2), (3, 3), (5, 2), (7, 2), (3, 4), (11, 2)];

fn fields() -> Vec<FieldSpec> {
    FIELDS.iter().map(|&(p, k)| FieldSpec::new(p, k).unwrap()).collect()
}

#[test]
fn character_is_balanced_and_zero_at_zero() {
    for f in fields() {
        let chi: Vec<i8> = f.elements().map(|a| f.quad_char(a)).collect();
        assert_eq!(chi[0], 0);
        assert!(chi[1..].iter().all(|&c| c != 0));
        let plus = chi.iter().filter(|&&c| c == 1).count() as u32;
        let minus = chi.iter().filter(|&&c| c == -1).count() as u32;
        assert_eq!(plus, (f.q() - 1) / 2);
        assert_eq!(minus, (f.q() - 1) / 2);
        assert_eq!(chi.iter().map(|&c| c as i64).sum::<i64>(), 0);
    }
}

#[test]
fn character_is_multiplicative_on_all_pairs() {
    for f in fields().into_iter().filter(|f| f.q() <= 125) {
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.quad_char(f.mul(a, b)), f.quad_char(a) * f.quad_char(b), "q={} a={a} b={b}", f.q());
            }
        }
    }
}

#[test]
fn table_agrees_with_euler_criterion() {
    for f in fields() {
        for a in f.elements() {
            assert_eq!(f.quad_char(a), f.euler_criterion(a), "q={} a={a}", f.q());
        }
    }
}

#[test]
fn extension_character_follows_log_parity() {
    for f in fields().into_iter().filter(|f| !f.is_prime_field()) {
        let g = f.generator().unwrap();
        assert_eq!(f.order(g).unwrap(), f.q() as u64 - 1);
        for a in 1..f.q() {
            let log = f.discrete_log(a).unwrap();
            assert_eq!(f.pow(g, log as u64), a);
            assert_eq!(f.quad_char(a), if log % 2 == 0 { 1 } else { -1 });
        }
    }
}

#[test]
fn canonical_round_trip() {
    for f in fields() {
        for a in f.elements() {
            assert_eq!(f.from_coeffs(&f.to_coeffs(a)).unwrap(), a);
        }
    }
}

#[test]
fn lagrange_in_every_field() {
    for f in fields() {
        for a in 1..f.q() {
            assert_eq!(f.pow(a, f.q() as u64 - 1), 1);
        }
    }
}

proptest! {
    #[test]
    fn field_axioms(idx in 0..FIELDS.len(), a in 0u32..1 << 16, b in 0u32..1 << 16, c in 0u32..1 << 16) {
        let (p, k) = FIELDS[idx];
        let f = FieldSpec::new(p, k).unwrap();
        let (a, b, c) = (a % f.q(), b % f.q(), c % f.q());
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn large_prime_field_arithmetic(a in 1u32..2_147_483_647, b in 1u32..2_147_483_647) {
        let f = FieldSpec::new(2_147_483_647, 1).unwrap();
        prop_assert_eq!(f.quad_char(f.mul(a, b)), f.quad_char(a) * f.quad_char(b));
        prop_assert_eq!(f.div(f.mul(a, b), b).unwrap(), a);
    }
}
