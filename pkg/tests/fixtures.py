"""Reference data for theta = 1/2 and the closed-form checks."""

from fractions import Fraction

# Banker's maximum drawing total at θ = 1/2 (rows: Player 1's third-card code,
# columns: Player 2's, 10 = stand, 11 = natural).  "t+" mixes on t+1.
TABLE_HALF = [
    "3 3 3 4 4 4 4 3 3 3 5 3",
    "3 3 4 4 4 4 4 4 3 3 5 3",
    "3 4 4 4 4 4 5 4 3 3 5 4",
    "4 4 4 4 4 5 5 4 4 3 5 4",
    "4 4 4 4 5 5 5 5 4 4 5 5",
    "4 4 4 5 5 5 5 5 5 4 5 5",
    "4 4 5 5 5 5 6 6 5 4 5+ 6",
    "3 4 4 4 5 5 6 6 3 3 6 6",
    "3 3 3 4 4 5 5 3 2 3 5 2",
    "3 3 3 3 4 4 4 3 3 3 5 3",
    "5 5 5 5 5 5 5+ 6 5 5 5 5",
    "3 3 4 4 5 5 6 6 2 3 5 .",
]


def table_half() -> list[list[str]]:
    rows = [r.split() for r in TABLE_HALF]
    rows[11][11] = ""
    return rows


# Kernel game at θ = 1/2, scaled by -(13**9)/8.
KERNEL_HALF = [
    [11815316, 11681780, 11681780, 11548244],
    [11621229, 11427789, 11680301, 11486861],
    [11621229, 11680301, 11427789, 11486861],
    [11421510, 11467270, 11467270, 11513030],
]

# Per-Player matrices at θ = 1/2 against Banker's eight combinations on
# (10,10,6), (10,11,6), (11,10,6), scaled by -(13**9)/16.
NASH_A_HALF = [
    [5774122, 5774122, 4995370, 4995370, 4605994, 4605994, 3827242, 3827242],
    [6359098, 6359098, 5580346, 5580346, 5580346, 5580346, 4801594, 4801594],
    [5127763, 5127763, 5300819, 5300819, 5387347, 5387347, 5560403, 5560403],
    [5756515, 5756515, 5929571, 5929571, 5929571, 5929571, 6102627, 6102627],
]
NASH_B_HALF = [
    [5774122, 4995370, 5774122, 4995370, 4605994, 3827242, 4605994, 3827242],
    [5127763, 5300819, 5127763, 5300819, 5387347, 5560403, 5387347, 5560403],
    [6359098, 5580346, 6359098, 5580346, 5580346, 4801594, 5580346, 4801594],
    [5756515, 5929571, 5756515, 5929571, 5929571, 6102627, 5929571, 6102627],
]

F = Fraction
NASH_Q_HALF = [
    (0, F(15175619, 33313280), F(15175619, 33313280), 0, 0, 0, 0, F(1481021, 16656640)),
    (0, F(1, 2), F(4229827, 11421696), 0, 0, 0, F(1481021, 11421696), 0),
    (0, F(4229827, 11421696), F(1, 2), 0, 0, F(1481021, 11421696), 0, 0),
    (0, F(4705731, 12373504), F(4705731, 12373504), 0, F(1481021, 6186752), 0, 0, 0),
    (0, F(3753923, 10469888), F(3753923, 10469888), F(1481021, 5234944), 0, 0, 0, 0),
    (F(15175619, 21891584), 0, 0, 0, 0, 0, 0, F(6715965, 21891584)),
    (F(1988135, 3331328), 0, 0, 0, 0, F(1343193, 6662656), F(1343193, 6662656), 0),
    (F(1568577, 3807232), 0, 0, 0, F(2238655, 3807232), 0, 0, 0),
    (F(3753923, 10469888), 0, 0, F(6715965, 10469888), 0, 0, 0, 0),
    (F(4229827, 10945792), 0, F(6715965, 21891584), 0, 0, F(6715965, 21891584), 0, 0),
    (F(4229827, 10945792), F(6715965, 21891584), 0, 0, 0, 0, F(6715965, 21891584), 0),
]
