use std::f64::consts::PI;

use super::lexer::{tokenize, Tok, Token};
use super::QasmError;
use crate::circuit::{Circuit, Instruction};
use crate::gate;
use crate::param::ParamExpr;

/// Parses OpenQASM 2.0 source into a [`Circuit`].
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, circuit: Circuit::default() };
    p.program()?;
    Ok(p.circuit)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    circuit: Circuit,
}

/// A resolved operand: a single bit or a whole register.
enum Operand {
    Bit(usize),
    Reg(Vec<usize>),
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, t: &Token, msg: impl Into<String>) -> Result<T, QasmError> {
        Err(QasmError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn expect_sym(&mut self, s: &'static str) -> Result<Token, QasmError> {
        let t = self.next();
        if t.tok == Tok::Sym(s) {
            Ok(t)
        } else {
            self.syntax(&t, format!("expected '{s}', found {:?}", t.tok))
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn ident(&mut self) -> Result<(String, Token), QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => self.syntax(&t, format!("expected identifier, found {other:?}")),
        }
    }

    fn uint(&mut self) -> Result<usize, QasmError> {
        let t = self.next();
        match t.tok {
            Tok::Number(v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            _ => self.syntax(&t, "expected non-negative integer"),
        }
    }

    fn program(&mut self) -> Result<(), QasmError> {
        if matches!(&self.peek().tok, Tok::Ident(s) if s == "OPENQASM") {
            self.next();
            let t = self.next();
            match t.tok {
                Tok::Number(v) if (2.0..3.0).contains(&v) => {}
                _ => return self.syntax(&t, "only OPENQASM 2.x is supported"),
            }
            self.expect_sym(";")?;
        }
        loop {
            if self.peek().tok == Tok::Eof {
                return Ok(());
            }
            self.statement()?;
        }
    }

    fn statement(&mut self) -> Result<(), QasmError> {
        let (word, t) = self.ident()?;
        match word.as_str() {
            "include" => {
                let s = self.next();
                if !matches!(s.tok, Tok::Str(_)) {
                    return self.syntax(&s, "expected file name");
                }
                self.expect_sym(";")?;
            }
            "qreg" | "creg" => {
                let (name, nt) = self.ident()?;
                self.expect_sym("[")?;
                let size = self.uint()?;
                self.expect_sym("]")?;
                self.expect_sym(";")?;
                let taken = self.circuit.qregs.iter().chain(&self.circuit.cregs).any(|(n, _)| *n == name);
                if taken {
                    return Err(QasmError::Redeclaration { name, line: nt.line, col: nt.col });
                }
                if word == "qreg" {
                    self.circuit.qregs.push((name, size));
                } else {
                    self.circuit.cregs.push((name, size));
                }
            }
            "barrier" => {
                let ops = self.operand_list(true)?;
                self.expect_sym(";")?;
                let mut qs = Vec::new();
                for op in ops {
                    match op {
                        Operand::Bit(q) => qs.push(q),
                        Operand::Reg(r) => qs.extend(r),
                    }
                }
                self.circuit.push(Instruction::barrier(&qs));
            }
            "measure" => {
                let q = self.operand(true)?;
                self.expect_sym("->")?;
                let c = self.operand(false)?;
                self.expect_sym(";")?;
                match (q, c) {
                    (Operand::Bit(q), Operand::Bit(c)) => self.circuit.push(Instruction::measure(q, c)),
                    (Operand::Reg(qs), Operand::Reg(cs)) if qs.len() == cs.len() => {
                        for (q, c) in qs.into_iter().zip(cs) {
                            self.circuit.push(Instruction::measure(q, c));
                        }
                    }
                    _ => return self.syntax(&t, "measure operands have mismatched shapes"),
                }
            }
            "gate" | "opaque" | "if" | "reset" => {
                return Err(QasmError::Unsupported { what: word, line: t.line, col: t.col });
            }
            _ => self.gate_application(word, t)?,
        }
        Ok(())
    }

    fn gate_application(&mut self, name: String, t: Token) -> Result<(), QasmError> {
        let spec = gate::lookup(&name).ok_or_else(|| QasmError::UnknownGate {
            name: name.clone(),
            line: t.line,
            col: t.col,
        })?;
        let mut params = Vec::new();
        if self.is_sym("(") {
            self.next();
            if !self.is_sym(")") {
                loop {
                    params.push(self.expr()?);
                    if self.is_sym(",") {
                        self.next();
                    } else {
                        break;
                    }
                }
            }
            self.expect_sym(")")?;
        }
        let ops = self.operand_list(true)?;
        self.expect_sym(";")?;
        let arity_err = |msg: String| QasmError::Arity { name: name.clone(), line: t.line, col: t.col, msg };
        if params.len() != spec.num_params {
            return Err(arity_err(format!("expected {} parameters, got {}", spec.num_params, params.len())));
        }
        if ops.len() != spec.num_qubits {
            return Err(arity_err(format!("expected {} qubits, got {}", spec.num_qubits, ops.len())));
        }
        // register broadcasting
        let width = ops.iter().filter_map(|o| match o {
            Operand::Reg(r) => Some(r.len()),
            Operand::Bit(_) => None,
        });
        let widths: Vec<usize> = width.collect();
        let n = match widths.first() {
            None => 1,
            Some(&w) if widths.iter().all(|&x| x == w) => w,
            Some(_) => return Err(arity_err("register operands differ in size".into())),
        };
        for k in 0..n {
            let qubits: Vec<usize> = ops
                .iter()
                .map(|o| match o {
                    Operand::Bit(q) => *q,
                    Operand::Reg(r) => r[k],
                })
                .collect();
            let mut sorted = qubits.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != qubits.len() {
                return Err(arity_err("repeated qubit operand".into()));
            }
            self.circuit.push(Instruction::gate(&name, &qubits, params.clone()));
        }
        Ok(())
    }

    fn operand_list(&mut self, quantum: bool) -> Result<Vec<Operand>, QasmError> {
        let mut ops = vec![self.operand(quantum)?];
        while self.is_sym(",") {
            self.next();
            ops.push(self.operand(quantum)?);
        }
        Ok(ops)
    }

    fn operand(&mut self, quantum: bool) -> Result<Operand, QasmError> {
        let (name, t) = self.ident()?;
        let regs = if quantum { &self.circuit.qregs } else { &self.circuit.cregs };
        let mut offset = 0;
        let mut found = None;
        for (n, size) in regs {
            if *n == name {
                found = Some((offset, *size));
                break;
            }
            offset += size;
        }
        let (offset, size) = found.ok_or_else(|| QasmError::UndeclaredRegister {
            name: name.clone(),
            line: t.line,
            col: t.col,
        })?;
        if self.is_sym("[") {
            self.next();
            let index = self.uint()?;
            self.expect_sym("]")?;
            if index >= size {
                return Err(QasmError::OutOfRange { name, index, size, line: t.line, col: t.col });
            }
            Ok(Operand::Bit(offset + index))
        } else {
            Ok(Operand::Reg((offset..offset + size).collect()))
        }
    }

    // expr := term (('+'|'-') term)*
    fn expr(&mut self) -> Result<ParamExpr, QasmError> {
        let mut lhs = self.term()?;
        while self.is_sym("+") || self.is_sym("-") {
            let op = self.next();
            let rhs = self.term()?;
            lhs = if op.tok == Tok::Sym("+") {
                ParamExpr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                ParamExpr::Sub(Box::new(lhs), Box::new(rhs))
            }
            .simplify();
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ParamExpr, QasmError> {
        let mut lhs = self.unary()?;
        while self.is_sym("*") || self.is_sym("/") {
            let op = self.next();
            let rhs = self.unary()?;
            lhs = if op.tok == Tok::Sym("*") {
                ParamExpr::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                ParamExpr::Div(Box::new(lhs), Box::new(rhs))
            }
            .simplify();
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ParamExpr, QasmError> {
        if self.is_sym("-") {
            self.next();
            let inner = self.unary()?;
            return Ok(ParamExpr::Neg(Box::new(inner)).simplify());
        }
        if self.is_sym("+") {
            self.next();
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<ParamExpr, QasmError> {
        let base = self.primary()?;
        if self.is_sym("^") {
            let t = self.next();
            let exp = self.unary()?;
            return match (base.eval(), exp.eval()) {
                (Some(b), Some(e)) => Ok(ParamExpr::Num(b.powf(e))),
                _ => self.syntax(&t, "'^' requires literal operands"),
            };
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<ParamExpr, QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Number(v) => Ok(ParamExpr::Num(*v)),
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Ident(s) if s == "pi" => Ok(ParamExpr::Num(PI)),
            Tok::Ident(s) if is_function(s) => {
                let f = s.clone();
                self.expect_sym("(")?;
                let arg = self.expr()?;
                self.expect_sym(")")?;
                let Some(x) = arg.eval() else {
                    return self.syntax(&t, format!("'{f}' requires a literal argument"));
                };
                Ok(ParamExpr::Num(apply_function(&f, x)))
            }
            Tok::Ident(s) => Ok(ParamExpr::Sym(s.clone())),
            other => self.syntax(&t, format!("expected expression, found {other:?}")),
        }
    }
}

fn is_function(s: &str) -> bool {
    matches!(s, "sin" | "cos" | "tan" | "exp" | "ln" | "sqrt")
}

fn apply_function(f: &str, x: f64) -> f64 {
    match f {
        "sin" => x.sin(),
        "cos" => x.cos(),
        "tan" => x.tan(),
        "exp" => x.exp(),
        "ln" => x.ln(),
        _ => x.sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::InstrKind;

    #[test]
    fn minimal_program() {
        let c = parse_qasm("qreg q[2]; cx q[0],q[1];").unwrap();
        assert_eq!(c.num_qubits(), 2);
        assert_eq!(c.instructions, vec![Instruction::gate_f("cx", &[0, 1], &[])]);
    }

    #[test]
    fn out_of_range_operand() {
        let err = parse_qasm("qreg q[2];\ncx q[0],q[5];").unwrap_err();
        assert!(matches!(err, QasmError::OutOfRange { index: 5, size: 2, line: 2, .. }), "{err:?}");
    }

    #[test]
    fn unknown_gate_and_redeclaration() {
        assert!(matches!(
            parse_qasm("qreg q[1]; foo q[0];"),
            Err(QasmError::UnknownGate { .. })
        ));
        assert!(matches!(
            parse_qasm("qreg q[1]; creg q[1];"),
            Err(QasmError::Redeclaration { .. })
        ));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_qasm("OPENQASM 2.0;\nqreg q[2]\ncx q[0],q[1];").unwrap_err();
        assert!(matches!(err, QasmError::Syntax { line: 3, col: 1, .. }), "{err:?}");
    }

    #[test]
    fn header_include_and_params() {
        let src = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\nrz(pi/2) q[0];\nu3(-pi, 0.5*2, theta+1) q[0];";
        let c = parse_qasm(src).unwrap();
        assert_eq!(c.instructions[0].params[0], ParamExpr::Num(PI / 2.0));
        let u = &c.instructions[1];
        assert_eq!(u.params[0], ParamExpr::Num(-PI));
        assert_eq!(u.params[1], ParamExpr::Num(1.0));
        assert_eq!(u.params[2].symbols(), vec!["theta".to_string()]);
    }

    #[test]
    fn broadcast_over_registers() {
        let c = parse_qasm("qreg a[2]; qreg b[2]; creg c[2]; h a; cx a,b; measure b -> c;").unwrap();
        let names: Vec<_> = c.instructions.iter().map(|i| i.name.as_str()).collect();
        assert_eq!(names, ["h", "h", "cx", "cx", "measure", "measure"]);
        assert_eq!(c.instructions[3].qubits, vec![1, 3]);
        assert_eq!(c.instructions[5].clbits, vec![1]);
        assert_eq!(c.instructions[5].kind, InstrKind::Measure);
    }

    #[test]
    fn unsupported_constructs() {
        assert!(matches!(
            parse_qasm("qreg q[1]; reset q[0];"),
            Err(QasmError::Unsupported { .. })
        ));
        assert!(matches!(
            parse_qasm("gate foo a { x a; }"),
            Err(QasmError::Unsupported { .. })
        ));
    }
}
