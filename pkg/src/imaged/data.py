"""Bundled word lists and morphisms."""

from __future__ import annotations

# 37-uniform morphism whose images avoid imaged factors of length 7.
M37 = {
    "0": "0001110101001100011101000110101001101",
    "1": "0001110101000110100110001110100110101",
    "2": "0001110100110001110101000110101001101",
}

F7 = ("0000", "1111", "0010", "1011", "010101")

SM7 = "0/01, 0/10, 1/01, 1/10, 01/0, 01/1, 10/0, 10/1, 01/10, 10/01"

SF7 = (
    "0001101", "0001110", "0011000", "0011101", "0100011", "0100110",
    "0110001", "1000110", "1000111", "1001100", "1001101", "1100011",
)

# Backtracking list for the length-6 unavoidability search.
L16 = (
    "010101", "001100", "001001", "011011", "001010", "010100", "011101", "010001",
    "011100", "001110", "011000", "000110", "010111", "000101", "010110", "011010",
)

P342 = (
    "000110000110001100011000011000110001100001100001100011000"
    "110000110001100011000011000"
)

M342 = {
    "0": P342
    + "1100011000011000011000110001100001100011000110000110000110001"
    + "100011000011000110001100001100011000110000110000110001100011000011"
    + "000110001100001100001100011000110000110001100011000011000011000110"
    + "00110000110000110001100011000011000110001100001100001100011000110",
    "1": P342
    + "0110001100011000011000011000110001100001100011000110000110000"
    + "110001100011000011000110001100001100011000110000110000110001100011"
    + "000011000110001100001100001100011000110000110001100011000011000110"
    + "00110000110000110001100011000011000110001100001100001100011000110",
    "2": P342
    + "0110001100011000011000011000110001100001100011000110000110000"
    + "110001100011000011000011000110001100001100011000110000110000110001"
    + "100011000011000110001100001100001100011000110000110001100011000011"
    + "00011000110000110000110001100011000011000110001100001100001100011",
}

F342 = ("010", "101", "111", "1001", "00000")

T342 = ("00011000", "0110001", "1000110", "1000011", "1100001", "0000110", "0110000")

I342 = (
    "", "0", "00", "000", "0000", "00001", "000011", "0001", "00011", "000110",
    "0001100", "001", "0011", "00110", "001100", "0011000", "01", "011", "0110",
    "01100", "011000", "1", "10", "100", "1000", "10000", "100001", "10001",
    "100011", "11", "110", "1100", "11000", "110000", "110001", "1100011",
)
