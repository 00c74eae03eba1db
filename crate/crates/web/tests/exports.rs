use deligne_lab_web::{diamond_json, periodic_deligne_json, twisted_sphere_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn deligne_of_two_sphere() {
    let v = parse(periodic_deligne_json("sphere(2)", "ev").unwrap());
    assert_eq!(v["group"]["lattice_rank"], 2);
    assert_eq!(v["split_agrees"], true);
}

#[test]
fn twisted_three_sphere() {
    for h in [1, 2, 3, 5] {
        let v = parse(twisted_sphere_json(3, h).unwrap());
        assert_eq!(v["ev"], "0");
        assert_eq!(v["odd"], if h == 1 { "0".to_string() } else { format!("Z/{h}") });
        assert_eq!(v["agree"], true);
    }
    assert!(twisted_sphere_json(2, 1).is_err());
}

#[test]
fn diamond_on_circle() {
    let v = parse(diamond_json("sphere(1)", "odd").unwrap());
    assert_eq!(v["passed"], true);
    assert_eq!(v["groups"].as_array().unwrap().len(), 6);
}

#[test]
fn bad_input_is_reported() {
    assert!(periodic_deligne_json("sphere(9)", "ev").unwrap_err().contains("simplices"));
    assert!(periodic_deligne_json("sphere(2)", "even-ish").is_err());
    assert!(diamond_json("nonsense(", "ev").is_err());
}
