"""Non-split systems for the partition check (counts need not match F_p)."""

SYSTEMS = [
    "vars x < y\neq y^2 - x",
    "vars x < y\neq x*y - 1",
    "vars x < y\neq x^2 + y^2 - 1",
    "vars x\neq x^2 + 1",
    "vars x < y\neq y^2 + 1\nineq x",
    "vars x < y\neq y^3 - x",
    "vars x < y\neq (y - x)^2*(y - 1)\nineq x*y",
    "vars x < y\neq x*y^2 + y - x\nineq y - 1",
    "vars x < y\neq x*y\neq x + y",
    "vars x < y < z\neq x*z - y\neq y^2 - x",
    "vars x < y < z\neq z^2 - x*y\nineq z - 1",
    "vars x < y\neq (x - 1)*y^2 - 2*y + x",
    "vars x < y\nineq x^2 - 2\nineq y^2 - x",
    "vars x < y\neq y^2 - 2*x*y + x^2 - 1",
    "vars x < y < z\neq x*y*z - 1\nineq x - y",
    "vars a < b\neq a^2*b - a\nineq b^2 - 3",
    "vars x < y\neq x^3 - x\neq x*y^2 - y",
    "vars x < y\neq y^4 - x^2",
    "vars x < y < z\neq (x - y)*z + 1\neq z^2 - z",
    "vars x < y\neq x^2*y^2 - 1\nineq x + y",
    "vars x < y\neq 2*y^2 + 3*x*y + x^2",
    "vars x < y < z\neq z*(z - x)*(z - y)\nineq y",
    "vars x < y\neq 1",
    "vars x < y\neq x\nineq x",
    "vars x < y < z\neq y^2 - x^3\neq z*y - x^2",
]
