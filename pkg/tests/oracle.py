"""Literal evaluation of the seventeen payoff sums, kept independent of the package.

Everything is integer arithmetic over 13**9: q(i) = Q[i]/169, q'(k) = C[k]/13.
Returns (X, Y) with a(θ) = (θ X + (1-θ) Y) / 13**9.
"""

Q = [16 + 9 * (i == 0) for i in range(10)]
C = [1 + 3 * (k == 0) for k in range(10)]
NAT, STD = 11, 10


def sgn(x):
    return (x > 0) - (x < 0)


def literal_payoff(u1, u2, T):
    """T is the set of (k1, k2, j) triples where Banker draws.

    A natural hand takes no third card, so its factor 13 is restored.
    """
    X = Y = 0
    # 1: Banker natural, or both Players natural (weights q q q -> scale 13**3)
    for i1 in range(10):
        for i2 in range(10):
            for j in range(10):
                if j >= 8 or (i1 >= 8 and i2 >= 8 and j <= 7):
                    w = Q[i1] * Q[i2] * Q[j] * 13**3
                    X += w * sgn(i1 - j)
                    Y += w * sgn(i2 - j)
    # 2-5: only Player 1 natural
    for i1 in (8, 9):
        for j in range(8):
            for i2 in range(5 + u2):
                for k2 in range(10):
                    if (NAT, k2, j) in T:
                        for l in range(10):
                            w = Q[i1] * Q[i2] * Q[j] * C[k2] * C[l] * 13
                            X += w
                            Y += w * sgn((i2 + k2) % 10 - (j + l) % 10)
                    else:
                        w = Q[i1] * Q[i2] * Q[j] * C[k2] * 169
                        X += w
                        Y += w * sgn((i2 + k2) % 10 - j)
            for i2 in range(5 + u2, 8):
                if (NAT, STD, j) in T:
                    for l in range(10):
                        w = Q[i1] * Q[i2] * Q[j] * C[l] * 169
                        X += w
                        Y += w * sgn(i2 - (j + l) % 10)
                else:
                    w = Q[i1] * Q[i2] * Q[j] * 2197
                    X += w
                    Y += w * sgn(i2 - j)
    # 6-9: only Player 2 natural
    for i2 in (8, 9):
        for j in range(8):
            for i1 in range(5 + u1):
                for k1 in range(10):
                    if (k1, NAT, j) in T:
                        for l in range(10):
                            w = Q[i1] * Q[i2] * Q[j] * C[k1] * C[l] * 13
                            X += w * sgn((i1 + k1) % 10 - (j + l) % 10)
                            Y += w
                    else:
                        w = Q[i1] * Q[i2] * Q[j] * C[k1] * 169
                        X += w * sgn((i1 + k1) % 10 - j)
                        Y += w
            for i1 in range(5 + u1, 8):
                if (STD, NAT, j) in T:
                    for l in range(10):
                        w = Q[i1] * Q[i2] * Q[j] * C[l] * 169
                        X += w * sgn(i1 - (j + l) % 10)
                        Y += w
                else:
                    w = Q[i1] * Q[i2] * Q[j] * 2197
                    X += w * sgn(i1 - j)
                    Y += w
    # 10-17: no naturals
    for j in range(8):
        hands1 = [(i1, k1, Q[i1] * C[k1], (i1 + k1) % 10) for i1 in range(5 + u1) for k1 in range(10)]
        hands1 += [(i1, STD, Q[i1] * 13, i1) for i1 in range(5 + u1, 8)]
        hands2 = [(i2, k2, Q[i2] * C[k2], (i2 + k2) % 10) for i2 in range(5 + u2) for k2 in range(10)]
        hands2 += [(i2, STD, Q[i2] * 13, i2) for i2 in range(5 + u2, 8)]
        for _, k1, w1, t1 in hands1:
            for _, k2, w2, t2 in hands2:
                if (k1, k2, j) in T:
                    for l in range(10):
                        b = (j + l) % 10
                        w = w1 * w2 * Q[j] * C[l]
                        X += w * sgn(t1 - b)
                        Y += w * sgn(t2 - b)
                else:
                    w = w1 * w2 * Q[j] * 13
                    X += w * sgn(t1 - j)
                    Y += w * sgn(t2 - j)
    return X, Y
