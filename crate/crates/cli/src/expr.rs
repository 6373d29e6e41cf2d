//! Exact integer expressions for command-line arguments: `10^9`, `59^8+1`,
//! `2*10^7`, plain decimals. All arithmetic is checked u64.

pub fn parse_u64_expr(input: &str) -> Result<u64, String> {
    let mut parser = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let value = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(format!(
            "unexpected trailing input at byte {} of {input:?}",
            parser.pos
        ));
    }
    Ok(value)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos) == Some(&b' ') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    // expr := product (('+' | '-') product)*
    fn expr(&mut self) -> Result<u64, String> {
        let mut acc = self.product()?;
        while let Some(op) = self.peek() {
            match op {
                b'+' => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    acc = acc.checked_add(rhs).ok_or("overflow in '+'")?;
                }
                b'-' => {
                    self.pos += 1;
                    let rhs = self.product()?;
                    acc = acc.checked_sub(rhs).ok_or("underflow in '-'")?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // product := power ('*' power)*
    fn product(&mut self) -> Result<u64, String> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = acc.checked_mul(rhs).ok_or("overflow in '*'")?;
        }
        Ok(acc)
    }

    // power := number ('^' number)?
    fn power(&mut self) -> Result<u64, String> {
        let base = self.number()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.number()?;
            let exp: u32 = exp.try_into().map_err(|_| "exponent too large")?;
            return base.checked_pow(exp).ok_or_else(|| "overflow in '^'".into());
        }
        Ok(base)
    }

    fn number(&mut self) -> Result<u64, String> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        let mut saw_digit = false;
        while let Some(&b) = self.bytes.get(self.pos) {
            match b {
                b'0'..=b'9' => {
                    saw_digit = true;
                    value = value
                        .checked_mul(10)
                        .and_then(|v| v.checked_add((b - b'0') as u64))
                        .ok_or("number exceeds u64")?;
                    self.pos += 1;
                }
                b'_' => self.pos += 1,
                _ => break,
            }
        }
        if !saw_digit {
            return Err(format!("expected a number at byte {start}"));
        }
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::parse_u64_expr;

    #[test]
    fn forms() {
        assert_eq!(parse_u64_expr("12345"), Ok(12345));
        assert_eq!(parse_u64_expr("10^9"), Ok(1_000_000_000));
        assert_eq!(parse_u64_expr("59^8+1"), Ok(59u64.pow(8) + 1));
        assert_eq!(parse_u64_expr("2*10^7"), Ok(20_000_000));
        assert_eq!(parse_u64_expr("10^2-80"), Ok(20));
        assert_eq!(parse_u64_expr("1_000_000"), Ok(1_000_000));
        assert_eq!(parse_u64_expr(" 53^8 "), Ok(53u64.pow(8)));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_u64_expr("").is_err());
        assert!(parse_u64_expr("10^").is_err());
        assert!(parse_u64_expr("abc").is_err());
        assert!(parse_u64_expr("10 9").is_err());
        assert!(parse_u64_expr("2^64").is_err());
        assert!(parse_u64_expr("5-6").is_err());
    }
}
