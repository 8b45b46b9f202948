use std::path::PathBuf;
use std::process::Command;

/// Compiles tests/smoke.c against the generated header and the shared
/// library cargo builds in the same deps directory as this test binary.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let libdir = exe.parent().unwrap().to_path_buf();
    assert!(libdir.join("libacy_ffi.so").exists() || libdir.join("libacy_ffi.dylib").exists(), "{}", libdir.display());
    let dir = tempfile_dir();
    let bin = dir.join("smoke");
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .arg(manifest.join("tests/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg("-L")
        .arg(&libdir)
        .arg(format!("-Wl,-rpath,{}", libdir.display()))
        .arg("-lacy_ffi")
        .arg("-o")
        .arg(&bin)
        .status()
        .expect("a C compiler on PATH (or $CC)");
    assert!(status.success());
    // cargo's LD_LIBRARY_PATH can point at an older copy of the library
    let out = Command::new(&bin).env("LD_LIBRARY_PATH", &libdir).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "1 2 14");
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("acy-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
