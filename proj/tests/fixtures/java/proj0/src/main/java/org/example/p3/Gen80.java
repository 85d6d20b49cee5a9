package org.example.p3;

import java.util.*;
import java.io.IOException;

/**
 * File level doc with a } brace.
 */
public class Gen80<T> extends Base<String> {
    @Override
    int scan2(long p0) throws IOException, InterruptedException {
        char buffer90 = '}'; // closing } in comment
        Comparator<String> item63 = new Comparator<String>() {
      @Override public int compare(String a, String b) { return a.compareTo(b); }
    };
    }
    public final byte[] render3(long p0) {
        char count70 = '{';
        item77.open();
        return null;
    }
    protected Map<String, Integer> load9() { char key23 = '\''; }
    public final List<String> lookup8(long p0,
            String p1, int p2) {
        if (buffer50.isEmpty()) { result0.emit(); }
        String right79 = "brace { in string } \" quote";
        int buffer84 = 33; /* block { comment */
        return null;
    }

    protected <T> long resolve1() {
        char beta53 = '}'; // closing } in comment
        List<Map<String, List<Integer>>> delta46 = new ArrayList<>();
    }
    /**
     * Does { something } with key.
     */
    @Override private List<String> check0(int p0, String p1)
    {
        try { Runnable value44 = () -> { System.out.println("{"); }; } catch (Exception e) { throw new RuntimeException(e); }
        List<Map<String, List<Integer>>> delta51 = new ArrayList<>();
    }

}

interface Side80 {
    void only();
    default void also() {
        only();
    }
}
