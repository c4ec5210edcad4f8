// Triangular fuzzy numbers, the membership function and the linguistic scale.

use fpp::{make_tfn, membership_degree, LinguisticScale};

fn main() {
    let t = make_tfn(1.0, 2.0, 3.0).expect("ordered band");
    println!("band {t}, reciprocal {}", t.reciprocal());

    // the membership keeps falling linearly outside the band
    for ratio in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0] {
        println!("  mu({ratio:>3}) = {:+.3}", membership_degree(&t, ratio));
    }

    assert!(make_tfn(2.0, 2.0, 3.0).is_err());

    let mut scale = LinguisticScale::default();
    println!("\ndefault scale:");
    for entry in scale.entries() {
        println!("  {:<20} {}", entry.label, entry.band);
    }
    scale
        .register("extremely high", make_tfn(6.0, 7.0, 8.0).unwrap())
        .unwrap();
    // labels must stay ordered by modal value
    assert!(scale
        .register("middling", make_tfn(2.5, 3.5, 4.5).unwrap())
        .is_err());
    println!(
        "lookup is case-insensitive: {}",
        scale.lookup("Extremely High").unwrap()
    );
}
