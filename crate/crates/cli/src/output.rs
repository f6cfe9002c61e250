use std::io::Write;
use std::path::Path;

use tempfile::NamedTempFile;

use crate::CliError;

/// Write through a temporary file in the destination directory and rename
/// it into place, so readers never see a partial file.
pub fn write_atomic<F>(path: &Path, fill: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = NamedTempFile::new_in(dir).map_err(io)?;
    {
        let mut buf = std::io::BufWriter::new(tmp.as_file_mut());
        fill(&mut buf).map_err(io)?;
        buf.flush().map_err(io)?;
    }
    // temp files are created private; the result is an ordinary output file
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))
            .map_err(io)?;
    }
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Write to `path`, or to stdout when there is none.
pub fn emit<F>(path: Option<&Path>, fill: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> std::io::Result<()>,
{
    match path {
        Some(p) => write_atomic(p, fill),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            fill(&mut lock).map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}
