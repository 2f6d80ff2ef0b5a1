//! Minimal SVG emission: labeled polylines for polygon overlays. Exact
//! rationals are converted to floats for drawing only.

use gnp_core::polygon::NewtonPolygon;

const COLORS: [&str; 3] = ["#1f77b4", "#2ca02c", "#d62728"];
const MARGIN: f64 = 40.0;
const X_SCALE: f64 = 140.0;
const Y_SCALE: f64 = 220.0;

fn to_f64(r: &gnp_core::rational::Rational) -> f64 {
    let n: f64 = r.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = r.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

pub fn polygons(layers: &[(&str, &NewtonPolygon)]) -> String {
    let max_x = layers
        .iter()
        .map(|(_, poly)| to_f64(poly.x_max()))
        .fold(1.0f64, f64::max);
    let max_y = layers
        .iter()
        .flat_map(|(_, poly)| poly.points().iter().map(|(_, y)| to_f64(y)))
        .fold(1.0f64, f64::max);
    let width = max_x * X_SCALE + 2.0 * MARGIN;
    let height = max_y * Y_SCALE + 2.0 * MARGIN;
    let px = |x: f64| MARGIN + x * X_SCALE;
    let py = |y: f64| height - MARGIN - y * Y_SCALE;

    let mut body = String::new();
    for (idx, (label, poly)) in layers.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let pts: Vec<String> = poly
            .points()
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", px(to_f64(x)), py(to_f64(y))))
            .collect();
        body.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
        let (lx, ly) = poly.points().last().map(|(x, y)| (to_f64(x), to_f64(y))).unwrap();
        body.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"{color}\" font-size=\"14\">{label}</text>\n",
            px(lx) + 6.0,
            py(ly) - 4.0 - 16.0 * idx as f64
        ));
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width:.0} {height:.0}\" \
         width=\"{width:.0}\" height=\"{height:.0}\">\n{body}</svg>"
    )
}
