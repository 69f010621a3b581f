//! Sample a K-orbit on an (x, a) grid and check it against the RK4 flow oracle.

use md5fol::catalog::{validate_params, FamilyId, FamilyParams};
use md5fol::cli::{grid, orbit_sample_rows, render_rows, DataFormat};
use md5fol::lie::{AlgebraElement, Covector};
use md5fol::orbit::{leaf_residual, numeric_flow, tangent_residual, OrbitChart};

fn main() {
    let d = validate_params(FamilyId::G5_4_10, FamilyParams::none()).unwrap();
    let f = Covector::new(0.0, 1.0, -0.5, 2.0, 0.25);

    let rows = orbit_sample_rows(&d, &f, &grid(-1.0, 1.0, 2), &grid(-1.0, 1.0, 5));
    print!("{}", render_rows(&rows, DataFormat::Csv));

    let chart = OrbitChart::new(d, f);
    println!("chart at (x=0, a=1): {:?}", chart.map(0.0, 1.0).0);
    println!(
        "tangent residual at a=0.7: {:.2e}",
        tangent_residual(&d, &f, 0.0, 0.7).unwrap()
    );

    // Flowing along X1 for time T moves the chart parameter by a = -T.
    let g = numeric_flow(&d, &f, &AlgebraElement::basis(0), 0.8, 2000).unwrap();
    println!("RK4 endpoint {:?}", g.0);
    println!("closed form  {:?}", chart.map(0.0, -0.8).0);
    println!("leaf residual {:.2e}", leaf_residual(&d, &f, &g));
}
