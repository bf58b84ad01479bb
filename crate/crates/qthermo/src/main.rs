use std::process::ExitCode;

fn main() -> ExitCode {
    // Rust ignores SIGPIPE by default, so writing CSV into a closed pipe
    // (for example `qthermo sweep | head`) would panic mid-stream. Restore
    // the default disposition so the process exits quietly like other
    // stream-oriented tools.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    qthermo::cli::run()
}
