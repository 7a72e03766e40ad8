use std::io::Write;
use std::process::{Command, Output, Stdio};

pub const GL11_W: &str = r#"{"m":1,"n":1,"entries":[["1","-2*t1"],["0","-1"]]}"#;

pub fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_superorbit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().expect("stdin piped");
        if let Some(text) = stdin {
            pipe.write_all(text.as_bytes()).expect("stdin written");
        }
    }
    child.wait_with_output().expect("binary finishes")
}

/// `(arguments, stdin, expected exit code)`.
pub type Case = (&'static [&'static str], Option<&'static str>, i32);

pub const EXIT_MATRIX: &[Case] = &[
    (&["eval", "x1 + t1", "t2*t1"], None, 0),
    (&["eval", "x1 +"], None, 2),
    (&["eval", "y1"], None, 2),
    (&["eval"], None, 2),
    (&["no-such-command"], None, 2),
    (&["ber"], Some(r#"{"m":1,"n":1,"entries":[["2","t1"],["t2","3"]]}"#), 0),
    (&["ber"], Some(r#"{"m":1,"n":1,"entries":[["1","0"],["0","0"]]}"#), 3),
    (&["ber"], Some(r#"{"m":1,"n":1,"entries":[["t1","1"],["1","t2"]]}"#), 3),
    (&["ber"], Some("{not json"), 2),
    (&["ber"], Some(r#"{"m":1,"n":1,"entries":[["1"]]}"#), 2),
    (&["inv"], Some(r#"{"m":1,"n":1,"entries":[["2","t1"],["t2","3"]]}"#), 0),
    (&["inv"], Some(r#"{"m":1,"n":1,"entries":[["0","0"],["0","1"]]}"#), 3),
    (&["strpow", "--kmax", "3"], Some(r#"{"m":1,"n":1,"entries":[["1","0"],["0","-1"]]}"#), 0),
    (&["bracket-table", "--algebra", "gl", "--shape", "1,1"], None, 0),
    (&["bracket-table", "--algebra", "sl", "--shape", "1,1"], None, 3),
    (&["bracket-table", "--algebra", "osp", "--shape", "1,1"], None, 3),
    (&["bracket-table", "--algebra", "gl"], None, 2),
    (&["bracket-table", "--algebra", "su", "--shape", "1,1"], None, 2),
    (&["check-axioms", "--algebra", "osp", "--shape", "1,2"], None, 0),
    (
        &["check-axioms"],
        Some(r#"{"dim":4,"parity":[0,0,1,1],"c":[{"i":3,"j":4,"k":1,"v":"2"},{"i":3,"j":4,"k":2,"v":"1"},{"i":4,"j":3,"k":1,"v":"1"},{"i":4,"j":3,"k":2,"v":"1"}]}"#),
        1,
    ),
    (&["check-axioms"], Some(r#"{"dim":1,"parity":[0],"c":[{"i":1,"j":2,"k":1,"v":"1"}]}"#), 2),
    (&["killing", "--algebra", "sl", "--shape", "2,1", "--expect", "nondegenerate"], None, 0),
    (&["killing", "--algebra", "gl", "--shape", "1,1", "--expect", "nondegenerate"], None, 1),
    (&["poisson", "--algebra", "gl", "--shape", "1,1", "x3", "x4"], None, 0),
    (&["poisson", "--algebra", "gl", "--shape", "1,1", "x3", "t1"], None, 2),
    (&["diagonalize", "--algebra", "gl", "--shape", "1,1", "--lambda", "1,-1"], Some(GL11_W), 0),
    (
        &["diagonalize", "--algebra", "gl", "--shape", "1,1", "--lambda", "1,-1"],
        Some(r#"{"m":1,"n":1,"entries":[["1","t1"],["t2","-1"]]}"#),
        1,
    ),
    (&["diagonalize", "--algebra", "gl", "--shape", "1,1", "--lambda", "1,1"], Some(GL11_W), 3),
    (&["diagonalize", "--algebra", "gl", "--shape", "1,1", "--lambda", "2,-1"], Some(GL11_W), 3),
    (&["diagonalize", "--algebra", "gl", "--shape", "1,1", "--lambda", "1"], Some(GL11_W), 2),
    (&["diagonalize", "--algebra", "sl", "--shape", "2,1", "--lambda", "1,2,4"], Some(GL11_W), 3),
    (&["vandermonde", "--shape", "1,1", "--lambda", "1,1"], None, 3),
    (&["vandermonde", "--shape", "2,1", "--lambda", "1,2,-3"], None, 0),
    (&["vandermonde", "--shape", "2,1", "--lambda", "1,x"], None, 2),
    (&["ad-invariance", "--algebra", "sl", "--shape", "2,1", "--seed", "4"], None, 0),
    (
        &["syzygy-verify"],
        Some(r#"{"q":["x1^2+x2^2+x3^2-1","x1*t1+x2*t2+x3*t3"],"f":["x1*t1+x2*t2+x3*t3","-(x1^2+x2^2+x3^2-1)"],"F":[["0","1"],["-1","0"]]}"#),
        0,
    ),
    (
        &["syzygy-verify"],
        Some(r#"{"q":["x1","x2"],"f":["x2","x1"],"F":[["0","1"],["-1","0"]]}"#),
        1,
    ),
    (&["syzygy-verify"], Some(r#"{"q":["x1"],"f":[]}"#), 2),
    (&["symmetrize", "--algebra", "gl", "--shape", "1,1", "x1*x3"], None, 0),
    (&["symmetrize", "--algebra", "gl", "--shape", "1,1", "x1^7"], None, 3),
    (&["star", "--algebra", "gl", "--shape", "1,1", "--h-order", "2", "x3", "x4"], None, 0),
    (&["casimir", "--algebra", "osp", "--shape", "1,2", "--k", "2"], None, 0),
    (&["central", "--algebra", "gl", "--shape", "1,1", "--kmax", "3"], None, 0),
    (&["quotient-basis", "--algebra", "gl", "--shape", "1,1", "--lambda", "1,-1", "--deg-cutoff", "3"], None, 0),
    (&["quotient-basis", "--algebra", "sl", "--shape", "2,1", "--lambda", "1,2,4"], None, 3),
    (
        &["quotient-basis", "--algebra", "gl", "--shape", "1,1", "--lambda", "1,-1", "--deg-cutoff", "1", "x1*x2"],
        None,
        3,
    ),
    (&["star-axioms", "--algebra", "gl", "--shape", "1,1", "--samples", "5"], None, 0),
];

/// Cases whose exit code differs from the expectation, with their stderr.
pub fn exit_matrix_failures() -> Vec<String> {
    EXIT_MATRIX
        .iter()
        .filter_map(|(args, stdin, want)| {
            let out = run(args, *stdin);
            let got = out.status.code().unwrap_or(-1);
            (got != *want).then(|| {
                format!(
                    "{args:?}: expected exit {want}, got {got} ({})",
                    String::from_utf8_lossy(&out.stderr).trim()
                )
            })
        })
        .collect()
}
