use psifrac::psi::{PsiFunction, RealFunction};
use psifrac::solvers::*;

fn main() {
    let ident = PsiFunction::builtin("identity", None).unwrap();
    // two-term instance
    let p2 = FdeProblem::hilfer2(
        ident.clone(),
        [(0.3, 0.5), (0.7, 0.5)],
        [1.0, 1.0, 1.0],
        [1.0, 1.0],
        RealFunction::zero(),
    )
    .unwrap();
    let grid = [0.5, 1.0];
    let closed = solve_hilfer2(&p2, &grid, &SeriesSpec::default()).unwrap();
    let oracle = volterra_oracle(&p2, &grid, 64).unwrap();
    println!("hilfer2 closed:  {:?}", closed.values);
    println!("hilfer2 oracle:  {:?}", oracle.values);
    println!("hilfer2 frozen:  [0.65272887614076815, 0.45872729456069844]");

    // three-term instance, both variants
    let p3 = FdeProblem::hilfer3(
        ident,
        [(0.2, 0.0), (0.4, 0.5), (0.6, 1.0)],
        [0.1, 0.1, 1.0, 1.0],
        [0.0, 0.0, 1.0],
        RealFunction::zero(),
    )
    .unwrap();
    let prab = solve_hilfer3(&p3, &grid, &SeriesSpec::default(), Hilfer3Variant::Prabhakar).unwrap();
    let twop = solve_hilfer3(&p3, &grid, &SeriesSpec::default(), Hilfer3Variant::TwoParameter).unwrap();
    let oracle = volterra_oracle(&p3, &grid, 64).unwrap();
    println!("hilfer3 prabhakar: {:?}", prab.values);
    println!("hilfer3 two-param: {:?}", twop.values);
    println!("hilfer3 oracle:    {:?}", oracle.values);
    println!("frozen prabhakar:  [0.47998682953622660, 0.37326440588149373]");
    println!("frozen two-param:  [0.44257337170992131, 0.32679779433907531]");
}
