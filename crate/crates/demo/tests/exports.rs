// Only success paths: building a JsError needs a JS host.

#[test]
fn exported_operations_succeed_natively() {
    let text = h3t_demo::generate(6, "c4h4", 1, 7).unwrap_or_else(|_| panic!("generate failed"));
    let report = h3t_demo::classify(&text).unwrap_or_else(|_| panic!("classify failed"));
    assert!(report.contains("O4: 0"), "{report}");
    let w = h3t_demo::witness("sop3").unwrap_or_else(|_| panic!("witness failed"));
    assert!(w.starts_with("CLAIM "), "{w}");
}
