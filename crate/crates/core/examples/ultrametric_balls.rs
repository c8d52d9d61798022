//! Balls, spheres and Haar measure in `Q_p^n`.
//!
//! `cargo run --example ultrametric_balls -- [p] [n]`

use padic_harmonic::numeric::{format_rational, rat};
use padic_harmonic::ultrametric::{
    ball_of_point, ball_relation, padic_abs, BallAddress, FieldParams, PAdicPoint,
};

fn main() -> padic_harmonic::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let p = args.first().and_then(|s| s.parse().ok()).unwrap_or(3);
    let n = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let params = FieldParams::new(p, n)?;

    println!("{params}: measures of centered balls and spheres");
    for level in -2..=2 {
        println!(
            "  level {level:>2}: |B| = {:<6} |S| = {}",
            format_rational(&params.ball_measure(level)),
            format_rational(&params.sphere_measure(level))
        );
    }

    let x = rat(5, p as i64);
    println!(
        "|{}|_{p} = {}",
        format_rational(&x),
        format_rational(&padic_abs(&x, p))
    );

    let coords = vec![rat(5, p as i64); n];
    let point = PAdicPoint::from_rationals(params, &coords)?;
    println!("point {point} has norm {}", format_rational(&point.abs()));
    for level in -1..=2 {
        let b = ball_of_point(&point, level);
        println!(
            "  B_{level}(x) = {b}  contains origin: {}",
            b.contains_origin()
        );
    }

    let unit = BallAddress::centered(params, 0);
    let children = unit.children();
    let total = children
        .iter()
        .map(|c| c.measure())
        .fold(rat(0, 1), |a, m| a + m);
    println!(
        "{} children of {unit} with total measure {}",
        children.len(),
        format_rational(&total)
    );
    let (a, b) = (&children[0], &children[children.len() - 1]);
    println!("relation({a}, {b}) = {:?}", ball_relation(a, b)?);
    println!("relation({a}, {unit}) = {:?}", ball_relation(a, &unit)?);
    Ok(())
}
