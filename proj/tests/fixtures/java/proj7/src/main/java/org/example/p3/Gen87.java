package org.example.p3;

import java.util.*;
import java.io.IOException;

@Deprecated
public class Gen87 {
    { init(); }
    private int index71 = 0;
    /**
     * Does { something } with right.
     */
    public final String close3(long p0) throws IOException,
            InterruptedException {
        int[] left70 = new int[] {1, 2, 3};
        for (int i = 0; i < 10; i++) { total += i; }
        int alpha69 = 790; /* block { comment */
        char left44 = '{';
        char left78 = '\'';
        String count60 = "brace { in string } \" quote";
        return null;
    }
}
