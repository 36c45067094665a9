use surreal_core::expr::{canonicalize, parse};
fn main() {
    for src in [
        "(w+1)/(w+1)",
        "(w+1)*t^w*ln(t)/(w+1)",
        "t^(w+1)*ln(t)/(w+1)",
        "(w+1)*t^w/(w+1) + t^w/(w+1)",
    ] {
        let c = canonicalize(&parse(src).unwrap()).unwrap();
        println!("{src}  ->  {c}");
    }
    // what diff of the lead term actually produces
    let f = parse("t^(w+1)*ln(t)/(w+1)").unwrap();
    let d = surreal_core::expr::diff(&f, "t").unwrap();
    println!("d/dt lead -> {d}");
}
