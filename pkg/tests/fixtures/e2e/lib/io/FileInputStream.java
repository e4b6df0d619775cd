package io;

public class FileInputStream extends InputStream {
    public FileInputStream(String name) { }
}
