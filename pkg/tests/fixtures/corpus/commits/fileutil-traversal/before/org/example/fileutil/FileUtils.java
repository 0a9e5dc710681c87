package org.example.fileutil;

import java.io.File;
import java.io.IOException;

public class FileUtils {

    public static void copy(File src, File dest) throws IOException {
        File target = resolve(dest.getPath());
        Streams.pipe(src, target);
    }

    public static File resolve(String path) {
        return new File(path);
    }

    public static long size(File file) {
        long n = file.length();
        return n;
    }

    public static void unsafeDelete(File file) {
        file.delete();
    }

    public static void legacyMove(File src, File dest) throws IOException {
        copy(src, dest);
        src.delete();
    }
}
