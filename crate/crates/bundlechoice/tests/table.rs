use bundlechoice::table::{emit_table, fmt3, read_table, TableFormat, TableRow};
use bundlechoice_core::summary::{summarize, SummaryTable};
use proptest::prelude::*;

fn row(n: usize, estimates: &[Vec<f64>], truth: &[f64]) -> TableRow {
    let names: Vec<String> = (0..truth.len()).map(|j| ["beta_2", "gamma_2", "rho1_1"][j].to_string()).collect();
    TableRow { n, summary: summarize(&names, estimates, truth).unwrap() }
}

#[test]
fn one_parameter_renders_four_statistics() {
    let t = emit_table(&[row(500, &[vec![0.9], vec![1.0], vec![1.2]], &[1.0])], TableFormat::Csv);
    let lines: Vec<&str> = t.lines().collect();
    assert_eq!(lines[0], "N,beta_2.MBIAS,beta_2.RMSE,beta_2.MED,beta_2.MAD");
    assert_eq!(lines[1], "500,0.033,0.129,0.000,0.100");
}

#[test]
fn coverage_columns_follow_the_point_statistics() {
    let mut r = row(250, &[vec![1.0, 2.0]], &[1.0, 1.0]);
    r.summary.params[1].coverage = Some(0.92);
    r.summary.params[1].length = Some(1.4921);
    let t = emit_table(&[r], TableFormat::Csv);
    assert_eq!(
        t.lines().next().unwrap(),
        "N,beta_2.MBIAS,beta_2.RMSE,beta_2.MED,beta_2.MAD,gamma_2.MBIAS,gamma_2.RMSE,gamma_2.MED,gamma_2.MAD,gamma_2.COVERAGE,gamma_2.LENGTH"
    );
    assert!(t.lines().nth(1).unwrap().ends_with(",0.920,1.492"));
}

#[test]
fn text_table_is_aligned() {
    let rows = [row(250, &[vec![1.5, 0.7]], &[1.0, 1.0]), row(1000, &[vec![1.1, 0.95]], &[1.0, 1.0])];
    let t = emit_table(&rows, TableFormat::Text);
    let lines: Vec<&str> = t.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].contains("beta_2") && lines[0].contains("gamma_2"));
    assert!(lines[1].trim_start().starts_with("N"));
    assert_eq!(lines[2].len(), lines[3].len());
    assert!(lines[3].trim_start().starts_with("1000"));
    assert!(lines[2].contains("-0.300"));
}

#[test]
fn negative_zero_is_not_printed() {
    assert_eq!(fmt3(-0.0001), "0.000");
    assert_eq!(fmt3(-0.0005), "-0.001");
    assert_eq!(fmt3(0.0234), "0.023");
}

fn values(s: &SummaryTable) -> Vec<f64> {
    s.params.iter().flat_map(|p| [p.mbias, p.rmse, p.med, p.mad]).collect()
}

proptest! {
    #[test]
    fn csv_roundtrips_at_three_decimals(ests in proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 3), 1..20), n in 2usize..5000) {
        let r = row(n, &ests, &[1.0, 1.0, 0.5]);
        let parsed = read_table(emit_table(std::slice::from_ref(&r), TableFormat::Csv).as_bytes()).unwrap();
        prop_assert_eq!(parsed.rows.len(), 1);
        prop_assert_eq!(parsed.rows[0].0, n);
        for (got, want) in parsed.rows[0].1.iter().zip(values(&r.summary)) {
            prop_assert_eq!(fmt3(got.unwrap()), fmt3(want));
            prop_assert!((got.unwrap() - want).abs() <= 0.0005 + 1e-12);
        }
        prop_assert!(parsed.get(n, "gamma_2.RMSE").unwrap() >= parsed.get(n, "gamma_2.MBIAS").unwrap().abs() - 1e-3);
    }
}
