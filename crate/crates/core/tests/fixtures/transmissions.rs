// (n, j1, j2, user in group 1, subfile, user in group 2, subfile)

pub const EXAMPLE_A: [[u32; 7]; 32] = [
    [1, 1, 1, 1, 5, 4, 2],
    [1, 1, 2, 1, 6, 3, 1],
    [1, 1, 3, 1, 7, 2, 1],
    [1, 1, 4, 1, 8, 1, 2],
    [1, 2, 1, 2, 1, 4, 6],
    [1, 2, 2, 2, 2, 3, 1],
    [1, 2, 3, 2, 3, 2, 5],
    [1, 2, 4, 2, 4, 1, 6],
    [1, 3, 1, 4, 1, 4, 10],
    [1, 3, 2, 4, 2, 3, 9],
    [1, 3, 3, 4, 3, 2, 9],
    [1, 3, 4, 4, 4, 1, 10],
    [1, 4, 1, 3, 5, 4, 14],
    [1, 4, 2, 3, 6, 3, 13],
    [1, 4, 3, 3, 7, 2, 13],
    [1, 4, 4, 3, 8, 1, 14],
    [2, 1, 1, 1, 13, 4, 4],
    [2, 1, 2, 1, 14, 3, 3],
    [2, 1, 3, 1, 15, 2, 4],
    [2, 1, 4, 1, 16, 1, 3],
    [2, 2, 1, 2, 9, 4, 8],
    [2, 2, 2, 2, 10, 3, 7],
    [2, 2, 3, 2, 11, 2, 8],
    [2, 2, 4, 2, 12, 1, 7],
    [2, 3, 1, 4, 13, 4, 12],
    [2, 3, 2, 4, 14, 3, 11],
    [2, 3, 3, 4, 15, 2, 12],
    [2, 3, 4, 4, 16, 1, 11],
    [2, 4, 1, 3, 9, 4, 16],
    [2, 4, 2, 3, 10, 3, 15],
    [2, 4, 3, 3, 11, 2, 16],
    [2, 4, 4, 3, 12, 1, 15],
];

pub const EXAMPLE_B: [[u32; 7]; 49] = [
    [1, 1, 1, 1, 43, 1, 7],
    [1, 1, 2, 1, 44, 2, 7],
    [1, 1, 3, 1, 45, 3, 7],
    [1, 1, 4, 1, 46, 4, 7],
    [1, 1, 5, 1, 47, 5, 7],
    [1, 1, 6, 1, 48, 6, 7],
    [1, 1, 7, 1, 49, 7, 6],
    [1, 2, 1, 2, 43, 1, 14],
    [1, 2, 2, 2, 44, 2, 14],
    [1, 2, 3, 2, 45, 3, 14],
    [1, 2, 4, 2, 46, 4, 14],
    [1, 2, 5, 2, 47, 5, 14],
    [1, 2, 6, 2, 48, 6, 14],
    [1, 2, 7, 2, 48, 7, 13],
    [1, 3, 1, 3, 43, 1, 21],
    [1, 3, 2, 3, 44, 2, 21],
    [1, 3, 3, 3, 45, 3, 21],
    [1, 3, 4, 3, 46, 4, 21],
    [1, 3, 5, 3, 47, 5, 21],
    [1, 3, 6, 3, 48, 6, 21],
    [1, 3, 7, 3, 49, 7, 20],
    [1, 4, 1, 4, 43, 1, 28],
    [1, 4, 2, 4, 44, 2, 28],
    [1, 4, 3, 4, 45, 3, 28],
    [1, 4, 4, 4, 46, 4, 28],
    [1, 4, 5, 4, 47, 5, 28],
    [1, 4, 6, 4, 48, 6, 28],
    [1, 4, 7, 4, 49, 7, 27],
    [1, 5, 1, 5, 43, 1, 35],
    [1, 5, 2, 5, 44, 2, 35],
    [1, 5, 3, 5, 45, 3, 35],
    [1, 5, 4, 5, 46, 4, 35],
    [1, 5, 5, 5, 47, 5, 35],
    [1, 5, 6, 5, 48, 6, 35],
    [1, 5, 7, 5, 49, 7, 34],
    [1, 6, 1, 6, 43, 1, 42],
    [1, 6, 2, 6, 44, 2, 42],
    [1, 6, 3, 6, 45, 3, 42],
    [1, 6, 4, 6, 46, 4, 42],
    [1, 6, 5, 6, 47, 5, 42],
    [1, 6, 6, 6, 48, 6, 42],
    [1, 6, 7, 6, 49, 7, 41],
    [1, 7, 1, 7, 36, 1, 49],
    [1, 7, 2, 7, 37, 2, 49],
    [1, 7, 3, 7, 38, 3, 49],
    [1, 7, 4, 7, 39, 4, 49],
    [1, 7, 5, 7, 40, 5, 49],
    [1, 7, 6, 7, 41, 6, 49],
    [1, 7, 7, 7, 42, 7, 48],
];
