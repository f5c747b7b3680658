//! Serialization shared by the CLI and the service, so that both emit the
//! same bytes for the same report.

use serde::Serialize;
use trotter_core::experiments::PointCloud;

/// Pretty JSON followed by a newline.
pub fn report_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize to JSON");
    s.push('\n');
    s
}

/// One row per point: the word, then the real and imaginary part of every
/// entry in row-major order (`re_1_1, im_1_1, re_1_2, …`).
pub fn cloud_csv(cloud: &PointCloud) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let d = cloud.dim;
    let mut header = vec!["word".to_string()];
    for i in 1..=d {
        for j in 1..=d {
            header.push(format!("re_{i}_{j}"));
            header.push(format!("im_{i}_{j}"));
        }
    }
    w.write_record(&header).expect("in-memory write");
    for p in &cloud.points {
        let mut row = vec![p.word.clone()];
        for (re, im) in p.re.iter().zip(&p.im) {
            row.push(re.to_string());
            row.push(im.to_string());
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV of ASCII fields")
}
