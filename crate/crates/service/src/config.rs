use thiserror::Error;

pub const DEFAULT_PORT: u16 = 8080;
pub const PORT_ENV: &str = "VERIDICT_PORT";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("{PORT_ENV}={0:?} is not a valid port")]
    BadEnvPort(String),
}

/// Flag beats environment beats the default.
pub fn resolve_port(flag: Option<u16>, env: Option<&str>) -> Result<u16, ConfigError> {
    if let Some(p) = flag {
        return Ok(p);
    }
    match env.map(str::trim) {
        None | Some("") => Ok(DEFAULT_PORT),
        Some(raw) => raw.parse().map_err(|_| ConfigError::BadEnvPort(raw.to_owned())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(resolve_port(None, None), Ok(8080));
        assert_eq!(resolve_port(None, Some("9000")), Ok(9000));
        assert_eq!(resolve_port(Some(7000), Some("9000")), Ok(7000));
        assert_eq!(resolve_port(None, Some("")), Ok(8080));
        assert_eq!(
            resolve_port(None, Some("http")),
            Err(ConfigError::BadEnvPort("http".into()))
        );
        // a bad env value is irrelevant when the flag is given
        assert_eq!(resolve_port(Some(1), Some("http")), Ok(1));
    }
}
