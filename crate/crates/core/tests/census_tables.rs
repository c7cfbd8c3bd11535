use num_bigint::BigUint;
use skewswitch::census::{count_eulerian_classes, count_switching_classes};

fn big(s: &str) -> BigUint {
    s.parse().unwrap()
}

#[test]
fn switching_classes_mod_two() {
    let expected = ["1", "1", "2", "3", "7", "16", "54", "243", "2038", "33120", "1182004"];
    for (n, want) in (1..=11).zip(expected) {
        assert_eq!(count_switching_classes(2, n).unwrap(), big(want), "n = {n}");
    }
}

#[test]
fn switching_classes_mod_three() {
    let expected = [
        "1",
        "1",
        "2",
        "4",
        "14",
        "120",
        "3222",
        "271287",
        "64154817",
        "41653775052",
        "74220906305025",
    ];
    for (n, want) in (1..=11).zip(expected) {
        assert_eq!(count_switching_classes(3, n).unwrap(), big(want), "n = {n}");
    }
}

#[test]
fn eulerian_classes_mod_four() {
    let expected = ["1", "1", "3", "8", "62", "1760"];
    for (n, want) in (1..=6).zip(expected) {
        assert_eq!(count_eulerian_classes(4, n).unwrap(), big(want), "n = {n}");
    }
    for n in 1..=5 {
        assert_eq!(
            count_switching_classes(4, n).unwrap(),
            count_eulerian_classes(4, n).unwrap()
        );
    }
}
