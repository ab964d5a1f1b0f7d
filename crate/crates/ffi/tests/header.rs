use std::path::PathBuf;
use std::process::Command;

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn exported_names() -> Vec<String> {
    let src = std::fs::read_to_string(manifest_dir().join("src/lib.rs")).unwrap();
    let mut names = Vec::new();
    let mut exported = false;
    for line in src.lines() {
        if line.trim() == "#[no_mangle]" {
            exported = true;
        } else if exported {
            let name = line
                .split("fn ")
                .nth(1)
                .and_then(|s| s.split('(').next())
                .unwrap();
            names.push(name.to_string());
            exported = false;
        }
    }
    names
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(manifest_dir().join("include/cops.h")).unwrap();
    let names = exported_names();
    assert!(names.len() >= 10);
    for name in names {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from include/cops.h"
        );
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(out) = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", "-std=c99"])
        .arg(manifest_dir().join("include/cops.h"))
        .output()
    else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
